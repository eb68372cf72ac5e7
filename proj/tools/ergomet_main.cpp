#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergomet/harness.hpp"
#include "ergomet/joinings.hpp"
#include "ergomet/json_io.hpp"
#include "ergomet/orbit_metrics.hpp"
#include "ergomet/transport.hpp"
#include "ergomet/util.hpp"

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ergomet::ConfigError("cannot open " + path);
    json j;
    is >> j;
    return j;
}

ergomet::Subsequence load_subsequence(const std::string& path, std::uint64_t horizon) {
    if (path.empty()) return ergomet::Subsequence::explicit_list({horizon});
    return ergomet::subsequence_from_json(load_json(path));
}

int cmd_besicovitch(const std::string& xp, const std::string& yp, std::uint64_t horizon,
                    const std::string& form, const std::string& subseq, int resolution) {
    const ergomet::Point x = ergomet::point_from_json(load_json(xp));
    const ergomet::Point y = ergomet::point_from_json(load_json(yp));
    const auto ns = load_subsequence(subseq, horizon);
    const auto est = form == "density" ? ergomet::besicovitch_density(x, y, ns, horizon, resolution)
                                       : ergomet::besicovitch(x, y, ns, horizon, resolution);
    for (const auto& [n, v] : est.trace)
        std::cout << "n=" << n << " estimate=" << ergomet::fmt_num(v) << "\n";
    std::cout << "value=" << ergomet::fmt_num(est.value) << "\n";
    return 0;
}

int cmd_genericity(const std::string& pp, const std::string& mp, std::uint64_t horizon, int order,
                   double tol, const std::string& subseq) {
    const ergomet::Point p = ergomet::point_from_json(load_json(pp));
    const auto m = ergomet::measure_from_json(load_json(mp));
    const auto ns = load_subsequence(subseq, horizon);
    const auto rep = ergomet::quasigeneric_check(p, m, ns, horizon, order, tol);
    for (const auto& [n, d] : rep.discrepancies)
        std::cout << "n=" << n << " tv=" << ergomet::fmt_num(d) << "\n";
    std::cout << "verdict=" << (rep.verdict ? "pass" : "fail") << "\n";
    return rep.verdict ? 0 : 1;
}

int cmd_dbar(const std::string& ap, const std::string& bp, int kmax, std::uint64_t seed,
             std::uint64_t horizon) {
    const auto a = ergomet::measure_from_json(load_json(ap));
    const auto b = ergomet::measure_from_json(load_json(bp));
    const double upper =
        ergomet::dbar_upper(a, b, ergomet::CouplingRule::Monotone, seed, horizon);
    std::cout << "k,lower,upper,fano_lower\n";
    for (const auto& [k, v] : ergomet::dbar_lower(a, b, kmax))
        std::cout << k << "," << ergomet::fmt_num(v) << "," << ergomet::fmt_num(upper) << ","
                  << ergomet::fmt_num(ergomet::fano_dbar_lower(a, b, std::max(2, k))) << "\n";
    const auto rb = ergomet::rho_bar_bounds(a, b, kmax, seed, horizon);
    std::cout << "rho_bar_lower=" << ergomet::fmt_num(rb.lower) << " (" << rb.lower_method << ")\n";
    std::cout << "rho_bar_upper=" << ergomet::fmt_num(rb.upper) << " (" << rb.upper_method << ")\n";
    return 0;
}

int cmd_run(const std::string& name, const std::string& config_path, const std::string& outdir) {
    const json config = load_json(config_path);
    const auto res = ergomet::run_scenario(name, config, outdir);
    for (const auto& c : res.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name
                  << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    for (const auto& o : res.outputs) std::cout << "wrote " << o.string() << "\n";
    std::cout << "scenario " << res.scenario << ": " << (res.ok ? "ok" : "failed") << "\n";
    return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shift-space metric toolkit"};
    app.require_subcommand(1);

    std::string xp, yp, form = "averaged", subseq;
    std::uint64_t horizon = 100000, seed = 1;
    int resolution = 64, order = 2, kmax = 4;
    double tol = 0.01;

    auto* bes = app.add_subcommand("besicovitch", "orbit pseudometric along a subsequence");
    bes->add_option("--x", xp, "point JSON file")->required();
    bes->add_option("--y", yp, "point JSON file")->required();
    bes->add_option("--horizon", horizon);
    bes->add_option("--form", form)->check(CLI::IsMember({"averaged", "density"}));
    bes->add_option("--subsequence", subseq, "subsequence JSON file");
    bes->add_option("--resolution", resolution);

    auto* gen = app.add_subcommand("genericity", "block-statistic convergence check");
    gen->add_option("--point", xp)->required();
    gen->add_option("--measure", yp)->required();
    gen->add_option("--horizon", horizon);
    gen->add_option("--order", order);
    gen->add_option("--tol", tol);
    gen->add_option("--subsequence", subseq);

    auto* db = app.add_subcommand("dbar", "two-sided transport bounds between measures");
    db->add_option("--a", xp)->required();
    db->add_option("--b", yp)->required();
    db->add_option("--kmax", kmax);
    db->add_option("--seed", seed);
    db->add_option("--horizon", horizon);

    std::string scenario, config_path, outdir = ".";
    auto* run = app.add_subcommand("run", "run an experiment scenario");
    run->add_option("scenario", scenario)->required();
    run->add_option("--config", config_path)->required();
    run->add_option("--out", outdir);

    std::string jconfig, joutdir = ".";
    auto* joining = app.add_subcommand("joining", "empirical joining audit");
    joining->add_option("--config", jconfig)->required();
    joining->add_option("--out", joutdir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bes->parsed()) return cmd_besicovitch(xp, yp, horizon, form, subseq, resolution);
        if (gen->parsed()) return cmd_genericity(xp, yp, horizon, order, tol, subseq);
        if (db->parsed()) return cmd_dbar(xp, yp, kmax, seed, horizon);
        if (run->parsed()) return cmd_run(scenario, config_path, outdir);
        if (joining->parsed()) return cmd_run("joining_audit", jconfig, joutdir);
    } catch (const ergomet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
