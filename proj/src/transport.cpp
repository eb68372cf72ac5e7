#include "ergomet/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ergomet {

namespace {

constexpr double kPivotTol = 1e-12;
constexpr std::size_t kMaxSide = 4096;

struct TransportSolution {
    double value = 0.0;
    std::vector<std::tuple<int, int, double>> flows;
};

// Primal transportation simplex on the basis tree. Dantzig entering rule with
// a Bland fallback against degenerate cycling.
TransportSolution solve_transport(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const std::function<double(int, int)>& cost) {
    const int m = static_cast<int>(supply.size());
    const int n = static_cast<int>(demand.size());
    auto cell = [n](int i, int j) { return static_cast<long long>(i) * n + j; };

    std::map<long long, double> flow;           // basis cells only
    std::vector<std::vector<int>> adj(m + n);   // node -> neighbor nodes (rows 0..m-1, cols m..m+n-1)

    auto add_edge = [&](int i, int j, double f) {
        flow[cell(i, j)] = f;
        adj[i].push_back(m + j);
        adj[m + j].push_back(i);
    };
    auto remove_edge = [&](int i, int j) {
        flow.erase(cell(i, j));
        auto& ai = adj[i];
        ai.erase(std::find(ai.begin(), ai.end(), m + j));
        auto& aj = adj[m + j];
        aj.erase(std::find(aj.begin(), aj.end(), i));
    };

    // Northwest corner start: exactly m+n-1 basic cells.
    {
        std::vector<double> ra = supply, rb = demand;
        int i = 0, j = 0;
        while (true) {
            const double t = std::min(ra[i], rb[j]);
            add_edge(i, j, t);
            ra[i] -= t;
            rb[j] -= t;
            if (i == m - 1 && j == n - 1) break;
            if (i < m - 1 && (ra[i] <= rb[j] || j == n - 1)) ++i;
            else ++j;
        }
    }

    std::vector<double> u(m), v(n);
    std::vector<char> seen(m + n);
    std::vector<int> order(m + n), parent(m + n);

    const long long max_iter = 1000LL * (m + n) + 100000;
    const long long bland_after = 60LL * (m + n) + 1000;
    for (long long iter = 0;; ++iter) {
        if (iter > max_iter) throw std::runtime_error("transportation simplex failed to converge");

        // Potentials via tree traversal from row 0.
        std::fill(seen.begin(), seen.end(), 0);
        int head = 0, tail = 0;
        order[tail++] = 0;
        seen[0] = 1;
        u[0] = 0.0;
        while (head < tail) {
            const int a = order[head++];
            for (int b : adj[a]) {
                if (seen[b]) continue;
                seen[b] = 1;
                if (a < m) v[b - m] = cost(a, b - m) - u[a];
                else u[b] = cost(b, a - m) - v[a - m];
                order[tail++] = b;
            }
        }

        // Entering cell.
        int bi = -1, bj = -1;
        double best = -kPivotTol;
        const bool bland = iter > bland_after;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                if (flow.count(cell(i, j))) continue;
                const double r = cost(i, j) - u[i] - v[j];
                if (r < best) {
                    best = r;
                    bi = i;
                    bj = j;
                    if (bland) break;
                }
            }
            if (bland && bi >= 0) break;
        }
        if (bi < 0) break;  // optimal

        // Unique tree path from col bj to row bi.
        std::fill(seen.begin(), seen.end(), 0);
        head = tail = 0;
        order[tail++] = m + bj;
        seen[m + bj] = 1;
        parent[m + bj] = -1;
        while (head < tail) {
            const int a = order[head++];
            if (a == bi) break;
            for (int b : adj[a]) {
                if (seen[b]) continue;
                seen[b] = 1;
                parent[b] = a;
                order[tail++] = b;
            }
        }

        // Alternating signs along the cycle; edges adjacent to col bj get -theta.
        std::vector<std::pair<long long, int>> path;  // (cell, sign)
        int node = bi;
        int sign = -1;
        while (parent[node] != -1) {
            const int par = parent[node];
            const long long c = node < m ? cell(node, par - m) : cell(par, node - m);
            path.emplace_back(c, sign);
            sign = -sign;
            node = par;
        }
        std::reverse(path.begin(), path.end());
        // After reversal the first edge touches col bj; recompute signs from there.
        sign = -1;
        for (auto& e : path) {
            e.second = sign;
            sign = -sign;
        }

        double theta = std::numeric_limits<double>::infinity();
        for (const auto& [c, s] : path)
            if (s < 0) theta = std::min(theta, flow[c]);
        long long leave = -1;
        for (const auto& [c, s] : path)
            if (s < 0 && flow[c] <= theta && (leave < 0 || c < leave)) leave = c;

        for (const auto& [c, s] : path) flow[c] += s * theta;
        remove_edge(static_cast<int>(leave / n), static_cast<int>(leave % n));
        add_edge(bi, bj, theta);
    }

    TransportSolution sol;
    for (const auto& [c, f] : flow) {
        if (f <= 0.0) continue;
        const int i = static_cast<int>(c / n);
        const int j = static_cast<int>(c % n);
        sol.value += f * cost(i, j);
        sol.flows.emplace_back(i, j, f);
    }
    return sol;
}

}  // namespace

double block_pair_cost(std::size_t va, std::size_t vb, int alphabet, int k, BlockCost cost) {
    if (va == vb) return 0.0;
    // digits from most significant
    int first_diff = -1, diffs = 0;
    std::size_t pw = 1;
    for (int i = 0; i < k - 1; ++i) pw *= static_cast<std::size_t>(alphabet);
    for (int i = 0; i < k; ++i) {
        const auto da = (va / pw) % static_cast<std::size_t>(alphabet);
        const auto db = (vb / pw) % static_cast<std::size_t>(alphabet);
        if (da != db) {
            if (first_diff < 0) first_diff = i;
            ++diffs;
        }
        pw /= static_cast<std::size_t>(alphabet);
    }
    if (cost == BlockCost::HammingRate) return static_cast<double>(diffs) / static_cast<double>(k);
    return std::ldexp(1.0, -first_diff);
}

double CouplingPlan::total_mass() const {
    double s = 0.0;
    for (const auto& [a, b, w] : weights) s += w;
    return s;
}

double CouplingPlan::marginal_defect(const BlockDistribution& a, const BlockDistribution& b) const {
    std::vector<double> ra(a.probs().size(), 0.0), cb(b.probs().size(), 0.0);
    for (const auto& [i, j, w] : weights) {
        ra[i] += w;
        cb[j] += w;
    }
    double d = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) d = std::max(d, std::abs(ra[i] - a[i]));
    for (std::size_t j = 0; j < cb.size(); ++j) d = std::max(d, std::abs(cb[j] - b[j]));
    return d;
}

OtResult ot_block(const BlockDistribution& a, const BlockDistribution& b, BlockCost cost) {
    if (a.k() != b.k() || a.alphabet() != b.alphabet())
        throw std::invalid_argument("mismatched block distributions");
    if (a.probs().size() > kMaxSide || b.probs().size() > kMaxSide)
        throw std::invalid_argument("instance too large");

    // The LP runs on the positive-mass supports only.
    std::vector<std::size_t> ia, ib;
    std::vector<double> sa, sb;
    for (std::size_t i = 0; i < a.probs().size(); ++i)
        if (a[i] > 0.0) {
            ia.push_back(i);
            sa.push_back(a[i]);
        }
    for (std::size_t j = 0; j < b.probs().size(); ++j)
        if (b[j] > 0.0) {
            ib.push_back(j);
            sb.push_back(b[j]);
        }
    // Balance exactly: absorb the (tiny) normalization mismatch in demand.
    const double suma = std::accumulate(sa.begin(), sa.end(), 0.0);
    const double sumb = std::accumulate(sb.begin(), sb.end(), 0.0);
    const double scale = suma / sumb;
    for (double& d : sb) d *= scale;

    const int A = a.alphabet();
    const int k = a.k();
    auto c = [&](int i, int j) { return block_pair_cost(ia[i], ib[j], A, k, cost); };
    const TransportSolution sol = solve_transport(sa, sb, c);

    OtResult out;
    out.value = sol.value;
    out.plan.alphabet = A;
    out.plan.k = k;
    for (const auto& [i, j, f] : sol.flows) out.plan.weights.emplace_back(ia[i], ib[j], f);
    std::sort(out.plan.weights.begin(), out.plan.weights.end());
    if (out.plan.marginal_defect(a, b) > 1e-8)
        throw std::runtime_error("transport plan violates marginals");
    return out;
}

std::vector<std::pair<int, double>> dbar_lower(const MeasureSpec& a, const MeasureSpec& b, int kmax) {
    if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
    std::vector<std::pair<int, double>> out;
    for (int k = 1; k <= kmax; ++k)
        out.emplace_back(k, ot_block(block_distribution(a, k), block_distribution(b, k),
                                     BlockCost::HammingRate)
                                .value);
    return out;
}

double dbar_upper(const MeasureSpec& a, const MeasureSpec& b, CouplingRule rule, std::uint64_t seed,
                  std::uint64_t horizon) {
    if (horizon < 10000) throw std::invalid_argument("horizon must be >= 10^4");
    const auto pts = sample_coupled({a, b}, rule, seed, horizon);
    const auto wa = pts[0].window(0, horizon);
    const auto wb = pts[1].window(0, horizon);
    std::uint64_t diff = 0;
    for (std::uint64_t j = 0; j < horizon; ++j)
        if (wa[j] != wb[j]) ++diff;
    return static_cast<double>(diff) / static_cast<double>(horizon);
}

DbarBound rho_bar_bounds(const MeasureSpec& a, const MeasureSpec& b, int kmax, std::uint64_t seed,
                         std::uint64_t horizon) {
    DbarBound out;
    out.lower =
        ot_block(block_distribution(a, kmax), block_distribution(b, kmax), BlockCost::Cantor).value;
    out.lower_method = "block-ot-cantor(k=" + std::to_string(kmax) + ")";
    const auto pts = sample_coupled({a, b}, CouplingRule::Monotone, seed, horizon);
    out.upper = besicovitch(pts[0], pts[1], Subsequence::explicit_list({horizon}), horizon).value;
    out.upper_method = "coupled-sample(monotone,seed=" + std::to_string(seed) +
                       ",horizon=" + std::to_string(horizon) + ")";
    return out;
}

double fano_dbar_lower(const MeasureSpec& a, const MeasureSpec& b, int k) {
    if (k < 2) throw std::invalid_argument("fano bound requires k >= 2");
    if (a.alphabet() != b.alphabet()) throw std::invalid_argument("alphabet mismatch");
    const double gap = std::abs(entropy_estimate(a, k) - entropy_estimate(b, k));
    if (gap <= 0.0) return 0.0;
    const double lg = std::log(static_cast<double>(a.alphabet() - 1));
    auto f = [&](double d) {
        double h = 0.0;
        if (d > 0.0 && d < 1.0) h = -d * std::log(d) - (1.0 - d) * std::log(1.0 - d);
        return h + d * lg;
    };
    if (f(0.5) <= gap) return 0.5;
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) <= gap) lo = mid;
        else hi = mid;
    }
    return lo;
}

}  // namespace ergomet
