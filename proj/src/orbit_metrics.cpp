#include "ergomet/orbit_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergomet/util.hpp"

namespace ergomet {

std::vector<std::uint8_t> cantor_exponents(const Point& p, const Point& q, std::uint64_t n,
                                           int resolution) {
    const std::uint64_t len = n + static_cast<std::uint64_t>(resolution);
    const std::vector<int> wp = p.window(0, len);
    const std::vector<int> wq = q.window(0, len);
    std::vector<std::uint8_t> exps(n, kCantorAgree);
    std::uint64_t next = len + 1;  // index of next disagreement, sentinel past the window
    for (std::uint64_t r = len; r-- > 0;) {
        if (wp[r] != wq[r]) next = r;
        if (r < n) {
            const std::uint64_t gap = next - r;
            exps[r] = gap < static_cast<std::uint64_t>(resolution)
                          ? static_cast<std::uint8_t>(gap)
                          : kCantorAgree;
        }
    }
    return exps;
}

namespace {

std::vector<std::uint64_t> usable_or_throw(const Subsequence& ns, std::uint64_t horizon) {
    auto u = ns.usable(horizon);
    if (u.empty()) throw std::invalid_argument("empty usable subsequence");
    return u;
}

// inf{delta > 0 : cum[e]/n < delta for the relevant threshold}, for a single n.
// cum[e] = #{j < n : exponent <= e}; attained exponents listed descending in
// `exps_desc` (so thresholds 2^-e ascend).
double density_value_single(const std::vector<std::uint64_t>& cum,
                            const std::vector<int>& exps_desc, std::uint64_t n) {
    if (exps_desc.empty()) return 0.0;
    double best = std::ldexp(1.0, -exps_desc.back());  // all of (t_M, inf) is admissible
    double lo = 0.0;
    for (int e : exps_desc) {
        const double t = std::ldexp(1.0, -e);
        const double g = static_cast<double>(cum[static_cast<std::size_t>(e)]) / static_cast<double>(n);
        if (g < t) best = std::min(best, std::max(lo, g));
        lo = t;
    }
    return best;
}

struct ComponentState {
    const MeasureSpec* spec;
    int prev = -1;

    const std::vector<double>& conditional() const {
        if (const auto* b = std::get_if<Bernoulli>(&spec->variant())) return b->probs;
        const auto& m = std::get<Markov>(spec->variant());
        return prev < 0 ? m.stationary : m.transitions[static_cast<std::size_t>(prev)];
    }
};

int inverse_cdf(const std::vector<double>& dist, double u) {
    double acc = 0.0;
    for (std::size_t a = 0; a + 1 < dist.size(); ++a) {
        acc += dist[a];
        if (u < acc) return static_cast<int>(a);
    }
    return static_cast<int>(dist.size()) - 1;
}

class CoupledSource final : public detail::SymbolSource {
public:
    CoupledSource(std::vector<MeasureSpec> specs, CouplingRule rule, std::uint64_t seed)
        : SymbolSource(static_cast<int>(specs.size())),
          specs_(std::move(specs)),
          rule_(rule),
          seed_(seed) {
        for (const auto& s : specs_) states_.push_back(ComponentState{&s});
    }

protected:
    void extend(std::uint64_t upto) const override {
        while (buf_[0].size() <= upto) {
            const std::uint64_t t = buf_[0].size();
            step(t);
        }
    }

private:
    void step(std::uint64_t t) const {
        const std::size_t M = specs_.size();
        std::vector<int> syms(M);
        switch (rule_) {
            case CouplingRule::Independent:
                for (std::size_t c = 0; c < M; ++c)
                    syms[c] = inverse_cdf(states_[c].conditional(), uniform_at(seed_, c + 1, t));
                break;
            case CouplingRule::Monotone: {
                const double u = uniform_at(seed_, 0, t);
                for (std::size_t c = 0; c < M; ++c) syms[c] = inverse_cdf(states_[c].conditional(), u);
                break;
            }
            case CouplingRule::MaximalPerStep: {
                const std::vector<double> p0 = states_[0].conditional();
                const int a0 = inverse_cdf(p0, uniform_at(seed_, 0, t));
                syms[0] = a0;
                for (std::size_t c = 1; c < M; ++c) {
                    const std::vector<double>& q = states_[c].conditional();
                    const double accept = p0[static_cast<std::size_t>(a0)] > 0.0
                                              ? std::min(1.0, q[static_cast<std::size_t>(a0)] /
                                                                  p0[static_cast<std::size_t>(a0)])
                                              : 0.0;
                    if (uniform_at(seed_, 1000 + c, t) < accept) {
                        syms[c] = a0;
                    } else {
                        std::vector<double> resid(q.size());
                        double z = 0.0;
                        for (std::size_t a = 0; a < q.size(); ++a) {
                            resid[a] = std::max(0.0, q[a] - p0[a]);
                            z += resid[a];
                        }
                        if (z <= 0.0) {
                            syms[c] = a0;  // identical conditionals
                        } else {
                            for (double& r : resid) r /= z;
                            syms[c] = inverse_cdf(resid, uniform_at(seed_, 2000 + c, t));
                        }
                    }
                }
                break;
            }
        }
        for (std::size_t c = 0; c < M; ++c) {
            buf_[c].push_back(syms[c]);
            states_[c].prev = syms[c];
        }
    }

    std::vector<MeasureSpec> specs_;
    CouplingRule rule_;
    std::uint64_t seed_;
    mutable std::vector<ComponentState> states_;
};

bool markov_irreducible(const Markov& m) {
    const std::size_t n = m.stationary.size();
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < n; ++b)
                if (!seen[b] && m.transitions[a][b] > 0.0) {
                    seen[b] = true;
                    stack.push_back(b);
                }
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
    }
    return true;
}

}  // namespace

const char* coupling_rule_name(CouplingRule r) {
    switch (r) {
        case CouplingRule::Independent: return "independent";
        case CouplingRule::Monotone: return "monotone";
        case CouplingRule::MaximalPerStep: return "maximal-per-step";
    }
    return "?";
}

BesicovitchEstimate besicovitch(const Point& p, const Point& q, const Subsequence& ns,
                                std::uint64_t horizon, int resolution) {
    const auto usable = usable_or_throw(ns, horizon);
    const std::uint64_t N = usable.back();
    const auto exps = cantor_exponents(p, q, N, resolution);

    BesicovitchEstimate est;
    est.horizon = horizon;
    est.form = BesicovitchForm::Average;
    double sum = 0.0;
    std::uint64_t j = 0;
    for (std::uint64_t n : usable) {
        for (; j < n; ++j)
            if (exps[j] != kCantorAgree) sum += std::ldexp(1.0, -exps[j]);
        const double avg = sum / static_cast<double>(n);
        est.trace.emplace_back(n, avg);
        est.value = std::max(est.value, avg);
    }
    return est;
}

BesicovitchEstimate besicovitch_density(const Point& p, const Point& q, const Subsequence& ns,
                                        std::uint64_t horizon, int resolution) {
    const auto usable = usable_or_throw(ns, horizon);
    const std::uint64_t N = usable.back();
    const auto exps = cantor_exponents(p, q, N, resolution);

    BesicovitchEstimate est;
    est.horizon = horizon;
    est.form = BesicovitchForm::DensityThreshold;
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(resolution), 0);
    std::uint64_t j = 0;
    for (std::uint64_t n : usable) {
        for (; j < n; ++j)
            if (exps[j] != kCantorAgree) ++hist[exps[j]];
        std::vector<std::uint64_t> cum(hist.size(), 0);
        std::vector<int> exps_desc;
        std::uint64_t acc = 0;
        for (std::size_t e = 0; e < hist.size(); ++e) {
            acc += hist[e];
            cum[e] = acc;
            if (hist[e] > 0) exps_desc.push_back(static_cast<int>(e));
        }
        // thresholds 2^-e ascend as e descends
        std::reverse(exps_desc.begin(), exps_desc.end());
        const double v = density_value_single(cum, exps_desc, n);
        est.trace.emplace_back(n, v);
        est.value = std::max(est.value, v);
    }
    return est;
}

Point sample_generic(const MeasureSpec& m, std::uint64_t seed, std::uint64_t length) {
    if (length < 1) throw std::invalid_argument("length must be positive");
    return std::visit(
        [&](const auto& spec) -> Point {
            using M = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<M, Bernoulli>) {
                const int A = static_cast<int>(spec.probs.size());
                MarkovSample g;
                g.transitions.assign(static_cast<std::size_t>(A), spec.probs);
                g.initial = spec.probs;
                g.seed = seed;
                return Point(Alphabet(A), {}, g);
            } else if constexpr (std::is_same_v<M, Markov>) {
                if (!markov_irreducible(spec)) throw std::runtime_error("not ergodic");
                MarkovSample g;
                g.transitions = spec.transitions;
                g.initial = spec.stationary;
                g.seed = seed;
                return Point(Alphabet(static_cast<int>(spec.stationary.size())), {}, g);
            } else if constexpr (std::is_same_v<M, Periodic>) {
                return Point::periodic(Alphabet(spec.alphabet), spec.word);
            } else {
                throw std::invalid_argument("cannot sample an empirical-block measure");
            }
        },
        m.variant());
}

std::vector<Point> sample_coupled(const std::vector<MeasureSpec>& specs, CouplingRule rule,
                                  std::uint64_t seed, std::uint64_t length) {
    if (length < 1) throw std::invalid_argument("length must be positive");
    if (specs.empty()) throw std::invalid_argument("need at least one spec");
    const int A = specs[0].alphabet();
    for (const auto& s : specs) {
        if (s.alphabet() != A) throw std::invalid_argument("alphabet mismatch");
        if (!std::holds_alternative<Bernoulli>(s.variant()) &&
            !std::holds_alternative<Markov>(s.variant()))
            throw std::invalid_argument("coupled sampling needs Bernoulli or Markov specs");
        if (const auto* mk = std::get_if<Markov>(&s.variant()))
            if (!markov_irreducible(*mk)) throw std::runtime_error("not ergodic");
    }
    auto src = std::make_shared<CoupledSource>(specs, rule, seed);
    std::vector<Point> out;
    for (std::size_t c = 0; c < specs.size(); ++c) {
        CoupledRef ref;
        ref.source = src;
        ref.component = static_cast<int>(c);
        ref.description = std::string("coupled(") + coupling_rule_name(rule) + ",seed=" +
                          std::to_string(seed) + ",component=" + std::to_string(c) + ")";
        out.emplace_back(Alphabet(A), std::vector<int>{}, ref);
    }
    return out;
}

GenericityReport quasigeneric_check(const Point& p, const MeasureSpec& m, const Subsequence& ns,
                                    std::uint64_t horizon, int k, double tol) {
    const auto usable = usable_or_throw(ns, horizon);
    GenericityReport rep;
    rep.k = k;
    rep.tol = tol;
    const BlockDistribution target = block_distribution(m, k);
    const std::uint64_t N = usable.back();
    if (N < static_cast<std::uint64_t>(k)) throw std::invalid_argument("last usable n_k must be >= k");

    const int A = p.alphabet_size();
    const std::size_t words = BlockDistribution::word_count(A, k);
    const std::vector<int> w = p.window(0, N + static_cast<std::uint64_t>(k) - 1);
    std::vector<std::uint64_t> counts(words, 0);
    std::size_t msd = 1;
    for (int i = 0; i < k - 1; ++i) msd *= static_cast<std::size_t>(A);
    std::size_t code = 0;
    std::uint64_t j = 0;
    for (std::uint64_t n : usable) {
        if (n < static_cast<std::uint64_t>(k)) continue;
        for (; j < n; ++j) {
            if (j == 0) {
                for (int i = 0; i < k; ++i)
                    code = code * static_cast<std::size_t>(A) + static_cast<std::size_t>(w[i]);
            } else {
                code = (code % msd) * static_cast<std::size_t>(A) +
                       static_cast<std::size_t>(w[j + static_cast<std::uint64_t>(k) - 1]);
            }
            ++counts[code];
        }
        double tvsum = 0.0;
        for (std::size_t i = 0; i < words; ++i)
            tvsum += std::abs(static_cast<double>(counts[i]) / static_cast<double>(n) - target[i]);
        rep.discrepancies.emplace_back(n, 0.5 * tvsum);
    }
    if (rep.discrepancies.empty()) throw std::invalid_argument("no usable n_k >= k");
    rep.verdict = rep.discrepancies.back().second <= tol;
    return rep;
}

}  // namespace ergomet
