#include "ergomet/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergomet {

namespace {

constexpr std::size_t kMaxWords = std::size_t{1} << 24;

void check_prob_vector(const std::vector<double>& p, double tol, const char* what) {
    double s = 0.0;
    for (double x : p) {
        if (x < -1e-15 || x > 1.0 + 1e-12)
            throw std::invalid_argument(std::string(what) + " entry out of [0,1]");
        s += x;
    }
    if (std::abs(s - 1.0) > tol)
        throw std::invalid_argument(std::string(what) + " must sum to 1");
}

}  // namespace

std::size_t BlockDistribution::word_count(int alphabet, int k) {
    std::size_t n = 1;
    for (int i = 0; i < k; ++i) {
        n *= static_cast<std::size_t>(alphabet);
        if (n > kMaxWords) throw std::invalid_argument("instance too large");
    }
    return n;
}

std::string BlockDistribution::word_string(std::size_t code, int alphabet, int k) {
    std::string s(static_cast<std::size_t>(k), '0');
    for (int i = k - 1; i >= 0; --i) {
        const int sym = static_cast<int>(code % static_cast<std::size_t>(alphabet));
        s[static_cast<std::size_t>(i)] = static_cast<char>(sym < 10 ? '0' + sym : 'a' + sym - 10);
        code /= static_cast<std::size_t>(alphabet);
    }
    return s;
}

std::size_t BlockDistribution::encode(const std::vector<int>& word, int alphabet) {
    std::size_t code = 0;
    for (int s : word) code = code * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(s);
    return code;
}

BlockDistribution::BlockDistribution(int alphabet, int k, std::vector<double> probs)
    : alphabet_(alphabet), k_(k), probs_(std::move(probs)) {
    if (alphabet < 2) throw std::invalid_argument("alphabet size must be >= 2");
    if (k < 1) throw std::invalid_argument("block length must be >= 1");
    if (probs_.size() != word_count(alphabet, k))
        throw std::invalid_argument("probability vector has wrong length");
    check_prob_vector(probs_, 1e-10, "block distribution");
}

double BlockDistribution::tv(const BlockDistribution& other) const {
    if (alphabet_ != other.alphabet_ || k_ != other.k_)
        throw std::invalid_argument("block distributions are not comparable");
    double s = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) s += std::abs(probs_[i] - other.probs_[i]);
    return 0.5 * s;
}

double BlockDistribution::entropy() const {
    double h = 0.0;
    for (double p : probs_)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

BlockDistribution BlockDistribution::drop_first() const {
    if (k_ < 2) throw std::invalid_argument("cannot marginalize a 1-block distribution");
    const std::size_t sub = word_count(alphabet_, k_ - 1);
    std::vector<double> out(sub, 0.0);
    for (std::size_t i = 0; i < probs_.size(); ++i) out[i % sub] += probs_[i];
    return BlockDistribution(alphabet_, k_ - 1, std::move(out));
}

BlockDistribution BlockDistribution::drop_last() const {
    if (k_ < 2) throw std::invalid_argument("cannot marginalize a 1-block distribution");
    const std::size_t sub = word_count(alphabet_, k_ - 1);
    std::vector<double> out(sub, 0.0);
    for (std::size_t i = 0; i < probs_.size(); ++i)
        out[i / static_cast<std::size_t>(alphabet_)] += probs_[i];
    return BlockDistribution(alphabet_, k_ - 1, std::move(out));
}

double BlockDistribution::consistency_defect() const {
    if (k_ < 2) return 0.0;
    return drop_first().tv(drop_last());
}

MeasureSpec MeasureSpec::bernoulli(std::vector<double> probs) {
    if (probs.size() < 2) throw std::invalid_argument("alphabet size must be >= 2");
    check_prob_vector(probs, 1e-12, "bernoulli probabilities");
    return MeasureSpec(Bernoulli{std::move(probs)});
}

MeasureSpec MeasureSpec::markov(std::vector<std::vector<double>> transitions,
                                std::vector<double> stationary) {
    const std::size_t n = transitions.size();
    if (n < 2) throw std::invalid_argument("alphabet size must be >= 2");
    if (stationary.size() != n) throw std::invalid_argument("stationary vector size mismatch");
    for (const auto& row : transitions) {
        if (row.size() != n) throw std::invalid_argument("transition matrix must be square");
        check_prob_vector(row, 1e-12, "transition row");
    }
    check_prob_vector(stationary, 1e-12, "stationary vector");
    for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += stationary[a] * transitions[a][b];
        if (std::abs(s - stationary[b]) > 1e-10)
            throw std::invalid_argument("stationary vector is not invariant under P");
    }
    return MeasureSpec(Markov{std::move(transitions), std::move(stationary)});
}

MeasureSpec MeasureSpec::periodic(std::vector<int> word, int alphabet) {
    if (word.empty()) throw std::invalid_argument("periodic word must be nonempty");
    if (alphabet == 0) alphabet = std::max(2, *std::max_element(word.begin(), word.end()) + 1);
    for (int s : word)
        if (s < 0 || s >= alphabet) throw std::invalid_argument("symbol outside alphabet");
    return MeasureSpec(Periodic{std::move(word), alphabet});
}

MeasureSpec MeasureSpec::empirical_block(BlockDistribution dist, double consistency_tol) {
    if (dist.consistency_defect() > consistency_tol)
        throw std::invalid_argument("empirical block distribution is not shift-consistent");
    return MeasureSpec(EmpiricalBlock{std::move(dist)});
}

int MeasureSpec::alphabet() const {
    return std::visit(
        [](const auto& m) -> int {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Bernoulli>) return static_cast<int>(m.probs.size());
            else if constexpr (std::is_same_v<M, Markov>) return static_cast<int>(m.stationary.size());
            else if constexpr (std::is_same_v<M, Periodic>) return m.alphabet;
            else return m.dist.alphabet();
        },
        v_);
}

BlockDistribution block_distribution(const MeasureSpec& m, int k) {
    if (k < 1) throw std::invalid_argument("block length must be >= 1");
    const int A = m.alphabet();
    return std::visit(
        [&](const auto& spec) -> BlockDistribution {
            using M = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<M, Bernoulli>) {
                const std::size_t n = BlockDistribution::word_count(A, k);
                std::vector<double> out(n);
                for (std::size_t code = 0; code < n; ++code) {
                    double p = 1.0;
                    std::size_t c = code;
                    for (int i = 0; i < k; ++i) {
                        p *= spec.probs[c % static_cast<std::size_t>(A)];
                        c /= static_cast<std::size_t>(A);
                    }
                    out[code] = p;
                }
                return BlockDistribution(A, k, std::move(out));
            } else if constexpr (std::is_same_v<M, Markov>) {
                const std::size_t n = BlockDistribution::word_count(A, k);
                std::vector<double> out(n);
                for (std::size_t code = 0; code < n; ++code) {
                    std::size_t c = code;
                    std::vector<int> w(static_cast<std::size_t>(k));
                    for (int i = k - 1; i >= 0; --i) {
                        w[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(A));
                        c /= static_cast<std::size_t>(A);
                    }
                    double p = spec.stationary[static_cast<std::size_t>(w[0])];
                    for (int i = 1; i < k; ++i)
                        p *= spec.transitions[static_cast<std::size_t>(w[i - 1])]
                                             [static_cast<std::size_t>(w[i])];
                    out[code] = p;
                }
                return BlockDistribution(A, k, std::move(out));
            } else if constexpr (std::is_same_v<M, Periodic>) {
                const std::size_t n = BlockDistribution::word_count(A, k);
                const std::size_t L = spec.word.size();
                std::vector<double> out(n, 0.0);
                for (std::size_t i = 0; i < L; ++i) {
                    std::size_t code = 0;
                    for (int j = 0; j < k; ++j)
                        code = code * static_cast<std::size_t>(A) +
                               static_cast<std::size_t>(spec.word[(i + static_cast<std::size_t>(j)) % L]);
                    out[code] += 1.0 / static_cast<double>(L);
                }
                return BlockDistribution(A, k, std::move(out));
            } else {
                if (k > spec.dist.k()) throw std::runtime_error("insufficient order");
                BlockDistribution d = spec.dist;
                while (d.k() > k) d = d.drop_last();
                return d;
            }
        },
        m.variant());
}

BlockDistribution empirical_measure(const Point& p, std::uint64_t n, int k) {
    if (k < 1) throw std::invalid_argument("block length must be >= 1");
    if (n < static_cast<std::uint64_t>(k)) throw std::invalid_argument("horizon must be >= k");
    const int A = p.alphabet_size();
    const std::size_t words = BlockDistribution::word_count(A, k);
    const std::vector<int> w = p.window(0, n + static_cast<std::uint64_t>(k) - 1);
    std::vector<std::uint64_t> counts(words, 0);
    std::size_t code = 0;
    std::size_t msd = 1;
    for (int i = 0; i < k - 1; ++i) msd *= static_cast<std::size_t>(A);
    for (std::uint64_t j = 0; j < n; ++j) {
        if (j == 0) {
            for (int i = 0; i < k; ++i)
                code = code * static_cast<std::size_t>(A) + static_cast<std::size_t>(w[i]);
        } else {
            code = (code % msd) * static_cast<std::size_t>(A) +
                   static_cast<std::size_t>(w[j + static_cast<std::uint64_t>(k) - 1]);
        }
        ++counts[code];
    }
    std::vector<double> out(words);
    for (std::size_t i = 0; i < words; ++i)
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    return BlockDistribution(A, k, std::move(out));
}

double entropy_estimate(const MeasureSpec& m, int k) {
    if (k < 2) throw std::invalid_argument("entropy estimate requires k >= 2");
    const double h = block_distribution(m, k).entropy() - block_distribution(m, k - 1).entropy();
    return std::max(0.0, h);
}

double weakstar_distance(const MeasureSpec& a, const MeasureSpec& b, int K) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    if (a.alphabet() != b.alphabet()) throw std::invalid_argument("alphabet mismatch");
    double s = 0.0;
    for (int k = 1; k <= K; ++k)
        s += std::ldexp(1.0, -k) * block_distribution(a, k).tv(block_distribution(b, k));
    return s;
}

}  // namespace ergomet
