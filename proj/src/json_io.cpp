#include "ergomet/json_io.hpp"

#include <ostream>
#include <stdexcept>

#include "ergomet/util.hpp"

namespace ergomet {

using nlohmann::json;

json point_to_json(const Point& p) {
    json g;
    std::visit(
        [&](const auto& gen) {
            using G = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<G, PeriodicExtension>) {
                g = {{"type", "periodic-extension"}, {"word", gen.word}};
            } else if constexpr (std::is_same_v<G, ExplicitFinite>) {
                g = {{"type", "explicit-finite"}, {"pad", gen.pad}};
            } else if constexpr (std::is_same_v<G, MechanicalWord>) {
                g = {{"type", "mechanical-word"}, {"intercept", gen.intercept}};
                if (gen.rational()) {
                    g["num"] = gen.num;
                    g["den"] = gen.den;
                } else {
                    g["slope"] = gen.slope;
                }
            } else if constexpr (std::is_same_v<G, MarkovSample>) {
                g = {{"type", "markov-sample"},
                     {"transitions", gen.transitions},
                     {"initial", gen.initial},
                     {"seed", gen.seed}};
            } else {
                throw std::runtime_error("coupled points are not serializable");
            }
        },
        p.generator());
    json out = {{"alphabet", p.alphabet_size()}, {"generator", g}, {"prefix", p.prefix()}};
    if (p.offset() != 0) out["offset"] = p.offset();
    return out;
}

Point point_from_json(const json& j) {
    const Alphabet a(j.at("alphabet").get<int>());
    std::vector<int> prefix;
    if (j.contains("prefix")) prefix = j.at("prefix").get<std::vector<int>>();
    const json& g = j.at("generator");
    const std::string type = g.at("type").get<std::string>();
    Generator gen;
    if (type == "periodic-extension") {
        gen = PeriodicExtension{g.at("word").get<std::vector<int>>()};
    } else if (type == "explicit-finite") {
        gen = ExplicitFinite{g.value("pad", 0)};
    } else if (type == "mechanical-word") {
        MechanicalWord m;
        m.intercept = g.value("intercept", 0.0);
        if (g.contains("den")) {
            m.num = g.at("num").get<long long>();
            m.den = g.at("den").get<long long>();
            m.slope = static_cast<double>(m.num) / static_cast<double>(m.den);
        } else {
            m.slope = g.at("slope").get<double>();
        }
        gen = m;
    } else if (type == "markov-sample") {
        MarkovSample m;
        m.transitions = g.at("transitions").get<std::vector<std::vector<double>>>();
        m.initial = g.at("initial").get<std::vector<double>>();
        m.seed = g.at("seed").get<std::uint64_t>();
        gen = m;
    } else {
        throw std::invalid_argument("unknown generator type: " + type);
    }
    Point p(a, std::move(prefix), std::move(gen));
    if (j.contains("offset")) p = shift(p, j.at("offset").get<std::uint64_t>());
    return p;
}

json measure_to_json(const MeasureSpec& m) {
    return std::visit(
        [&](const auto& spec) -> json {
            using M = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<M, Bernoulli>) {
                return {{"type", "bernoulli"}, {"probs", spec.probs}};
            } else if constexpr (std::is_same_v<M, Markov>) {
                return {{"type", "markov"},
                        {"transitions", spec.transitions},
                        {"stationary", spec.stationary}};
            } else if constexpr (std::is_same_v<M, Periodic>) {
                return {{"type", "periodic"}, {"word", spec.word}, {"alphabet", spec.alphabet}};
            } else {
                return {{"type", "empirical-block"},
                        {"alphabet", spec.dist.alphabet()},
                        {"k", spec.dist.k()},
                        {"probs", spec.dist.probs()}};
            }
        },
        m.variant());
}

MeasureSpec measure_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "bernoulli") return MeasureSpec::bernoulli(j.at("probs").get<std::vector<double>>());
    if (type == "markov")
        return MeasureSpec::markov(j.at("transitions").get<std::vector<std::vector<double>>>(),
                                   j.at("stationary").get<std::vector<double>>());
    if (type == "periodic")
        return MeasureSpec::periodic(j.at("word").get<std::vector<int>>(), j.value("alphabet", 0));
    if (type == "empirical-block")
        return MeasureSpec::empirical_block(
            BlockDistribution(j.at("alphabet").get<int>(), j.at("k").get<int>(),
                              j.at("probs").get<std::vector<double>>()),
            j.value("consistency_tol", 1e-8));
    throw std::invalid_argument("unknown measure type: " + type);
}

Subsequence subsequence_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "all") return Subsequence::all();
    if (type == "stride") return Subsequence::stride(j.at("s").get<std::uint64_t>());
    if (type == "geometric") return Subsequence::geometric(j.at("base").get<double>());
    if (type == "explicit")
        return Subsequence::explicit_list(j.at("values").get<std::vector<std::uint64_t>>());
    throw std::invalid_argument("unknown subsequence type: " + type);
}

void write_block_csv(const BlockDistribution& d, std::ostream& os) {
    os << "word,probability\n";
    for (std::size_t code = 0; code < d.probs().size(); ++code)
        os << BlockDistribution::word_string(code, d.alphabet(), d.k()) << "," << fmt_num(d[code])
           << "\n";
}

}  // namespace ergomet
