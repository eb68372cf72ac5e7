#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ergomet/symbolic.hpp"

namespace ergomet {

// Probability vector over length-k words, indexed by the base-|A| code of the
// word (first symbol most significant, so the index order is lexicographic).
class BlockDistribution {
public:
    BlockDistribution(int alphabet, int k, std::vector<double> probs);

    int alphabet() const { return alphabet_; }
    int k() const { return k_; }
    const std::vector<double>& probs() const { return probs_; }
    double operator[](std::size_t code) const { return probs_[code]; }

    double tv(const BlockDistribution& other) const;  // half L1
    double entropy() const;                           // nats
    BlockDistribution drop_first() const;
    BlockDistribution drop_last() const;
    // TV between the two one-sided marginalizations; zero means the vector is
    // the level-k fingerprint of a shift-invariant measure.
    double consistency_defect() const;

    static std::size_t word_count(int alphabet, int k);
    static std::string word_string(std::size_t code, int alphabet, int k);
    static std::size_t encode(const std::vector<int>& word, int alphabet);

private:
    int alphabet_;
    int k_;
    std::vector<double> probs_;
};

struct Bernoulli {
    std::vector<double> probs;
};

struct Markov {
    std::vector<std::vector<double>> transitions;
    std::vector<double> stationary;
};

struct Periodic {
    std::vector<int> word;
    int alphabet = 2;
};

struct EmpiricalBlock {
    BlockDistribution dist;
};

class MeasureSpec {
public:
    static MeasureSpec bernoulli(std::vector<double> probs);
    static MeasureSpec markov(std::vector<std::vector<double>> transitions,
                              std::vector<double> stationary);
    static MeasureSpec periodic(std::vector<int> word, int alphabet = 0);
    // consistency_tol bounds the allowed marginalization mismatch; empirical
    // fingerprints built from finite orbits carry an O(k/n) boundary defect.
    static MeasureSpec empirical_block(BlockDistribution dist, double consistency_tol = 1e-8);

    int alphabet() const;
    using Variant = std::variant<Bernoulli, Markov, Periodic, EmpiricalBlock>;
    const Variant& variant() const { return v_; }

private:
    explicit MeasureSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

BlockDistribution block_distribution(const MeasureSpec& m, int k);

BlockDistribution empirical_measure(const Point& p, std::uint64_t n, int k);

// Conditional block entropy H_k - H_{k-1}, in nats. Requires k >= 2.
double entropy_estimate(const MeasureSpec& m, int k);

// sum_{k=1..K} 2^-k * TV(a_k, b_k); truncation error <= 2^-K.
double weakstar_distance(const MeasureSpec& a, const MeasureSpec& b, int K);

}  // namespace ergomet
