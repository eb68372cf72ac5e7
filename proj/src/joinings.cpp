#include "ergomet/joinings.hpp"

#include <cmath>
#include <stdexcept>

namespace ergomet {

namespace {

std::map<std::vector<std::size_t>, double> count_tuples(const std::vector<Point>& points,
                                                        std::uint64_t start, std::uint64_t n,
                                                        int k) {
    const std::size_t M = points.size();
    const int A = points[0].alphabet_size();
    std::vector<std::vector<int>> w(M);
    for (std::size_t c = 0; c < M; ++c)
        w[c] = points[c].window(start, n + static_cast<std::uint64_t>(k) - 1);

    std::size_t msd = 1;
    for (int i = 0; i < k - 1; ++i) msd *= static_cast<std::size_t>(A);

    std::map<std::vector<std::size_t>, std::uint64_t> counts;
    std::vector<std::size_t> codes(M, 0);
    for (std::uint64_t j = 0; j < n; ++j) {
        for (std::size_t c = 0; c < M; ++c) {
            if (j == 0) {
                codes[c] = 0;
                for (int i = 0; i < k; ++i)
                    codes[c] = codes[c] * static_cast<std::size_t>(A) +
                               static_cast<std::size_t>(w[c][i]);
            } else {
                codes[c] = (codes[c] % msd) * static_cast<std::size_t>(A) +
                           static_cast<std::size_t>(w[c][j + static_cast<std::uint64_t>(k) - 1]);
            }
        }
        ++counts[codes];
    }
    std::map<std::vector<std::size_t>, double> dist;
    for (const auto& [key, cnt] : counts)
        dist[key] = static_cast<double>(cnt) / static_cast<double>(n);
    return dist;
}

}  // namespace

EmpiricalJoining empirical_joining(const std::vector<Point>& points, const Subsequence& ns,
                                   std::uint64_t horizon, int k) {
    if (points.size() < 2) throw std::invalid_argument("need a tuple of at least two points");
    if (k < 1) throw std::invalid_argument("block length must be >= 1");
    const int A = points[0].alphabet_size();
    for (const auto& p : points)
        if (p.alphabet_size() != A) throw std::invalid_argument("alphabet mismatch");
    const auto usable = ns.usable(horizon);
    if (usable.empty() || usable.back() < static_cast<std::uint64_t>(k))
        throw std::invalid_argument("largest usable n_k must be >= k");

    EmpiricalJoining j;
    j.components = points;
    j.n = usable.back();
    j.k = k;
    j.alphabet = A;
    j.dist = count_tuples(points, 0, j.n, k);
    return j;
}

BlockDistribution joining_marginal(const EmpiricalJoining& j, int component) {
    const std::size_t words = BlockDistribution::word_count(j.alphabet, j.k);
    // Recover the integer counts so the marginal is bit-identical to
    // empirical_measure (mass = count/n exactly, counts are far below 2^53).
    std::vector<std::uint64_t> counts(words, 0);
    for (const auto& [key, mass] : j.dist)
        counts[key[static_cast<std::size_t>(component)]] +=
            static_cast<std::uint64_t>(std::llround(mass * static_cast<double>(j.n)));
    std::vector<double> out(words);
    for (std::size_t w = 0; w < words; ++w)
        out[w] = static_cast<double>(counts[w]) / static_cast<double>(j.n);
    return BlockDistribution(j.alphabet, j.k, std::move(out));
}

double invariance_defect(const EmpiricalJoining& j) {
    const auto shifted = count_tuples(j.components, 1, j.n, j.k);
    double s = 0.0;
    for (const auto& [key, mass] : j.dist) {
        const auto it = shifted.find(key);
        s += std::abs(mass - (it == shifted.end() ? 0.0 : it->second));
    }
    for (const auto& [key, mass] : shifted)
        if (!j.dist.count(key)) s += mass;
    return 0.5 * s;
}

FactorConditionReport factor_condition(const Point& x, const Point& xN, const std::vector<int>& B,
                                       double delta, const Subsequence& ns, std::uint64_t horizon) {
    if (B.empty()) throw std::invalid_argument("cylinder word must be nonempty");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta out of range");
    const auto usable = ns.usable(horizon);
    if (usable.empty()) throw std::invalid_argument("empty usable subsequence");
    const std::uint64_t n = usable.back();
    const int blen = static_cast<int>(B.size());

    const auto wx = x.window(0, n + static_cast<std::uint64_t>(blen) - 1);
    const auto wy = xN.window(0, n + static_cast<std::uint64_t>(blen) - 1);
    const auto exps = cantor_exponents(x, xN, n);

    FactorConditionReport rep;
    rep.cylinder = B;
    rep.delta = delta;
    rep.n = n;
    std::uint64_t symdiff = 0, mismatch = 0;
    for (std::uint64_t j = 0; j < n; ++j) {
        bool inx = true, iny = true;
        for (int i = 0; i < blen && (inx || iny); ++i) {
            if (wx[j + static_cast<std::uint64_t>(i)] != B[static_cast<std::size_t>(i)]) inx = false;
            if (wy[j + static_cast<std::uint64_t>(i)] != B[static_cast<std::size_t>(i)]) iny = false;
        }
        const bool sd = inx != iny;
        const bool mm = exps[j] != kCantorAgree && std::ldexp(1.0, -exps[j]) >= delta;
        if (sd) ++symdiff;
        if (mm) ++mismatch;
        if (sd && !mm) ++rep.pointwise_violations;
    }
    rep.symdiff_density = static_cast<double>(symdiff) / static_cast<double>(n);
    rep.mismatch_density = static_cast<double>(mismatch) / static_cast<double>(n);
    rep.inequality_holds = rep.symdiff_density <= rep.mismatch_density + 1e-12;
    return rep;
}

}  // namespace ergomet
