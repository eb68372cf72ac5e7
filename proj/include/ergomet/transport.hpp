#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "ergomet/measures.hpp"
#include "ergomet/orbit_metrics.hpp"

namespace ergomet {

enum class BlockCost { HammingRate, Cantor };

// Cost of a pair of k-blocks given by their codes: per-symbol disagreement
// rate, or 2^-(first index of disagreement).
double block_pair_cost(std::size_t va, std::size_t vb, int alphabet, int k, BlockCost cost);

struct CouplingPlan {
    int alphabet = 0;
    int k = 0;
    std::vector<std::tuple<std::size_t, std::size_t, double>> weights;  // (code_a, code_b, w)

    double total_mass() const;
    // Max deviation of the row/column marginals from the prescribed pair.
    double marginal_defect(const BlockDistribution& a, const BlockDistribution& b) const;
};

struct OtResult {
    double value = 0.0;
    CouplingPlan plan;
};

// Exact transportation LP over the two block distributions. Supports up to
// 4096 words per side.
OtResult ot_block(const BlockDistribution& a, const BlockDistribution& b, BlockCost cost);

// Hamming-rate OT values at orders 1..kmax; each is a d-bar lower bound.
std::vector<std::pair<int, double>> dbar_lower(const MeasureSpec& a, const MeasureSpec& b, int kmax);

// Empirical per-symbol disagreement density of a coupled sample; a d-bar
// upper estimate up to statistical tolerance.
double dbar_upper(const MeasureSpec& a, const MeasureSpec& b, CouplingRule rule, std::uint64_t seed,
                  std::uint64_t horizon);

struct DbarBound {
    double lower = 0.0;
    double upper = 1.0;
    std::string lower_method;
    std::string upper_method;
};

// Two-sided rho-bar bounds with Cantor cost: block-marginal LP below, an
// explicit coupled sample above.
DbarBound rho_bar_bounds(const MeasureSpec& a, const MeasureSpec& b, int kmax, std::uint64_t seed,
                         std::uint64_t horizon);

// Largest delta in [0, 1/2] with H_b(delta) + delta*log(|A|-1) <= entropy gap
// at order k; a d-bar lower bound via Fano's inequality.
double fano_dbar_lower(const MeasureSpec& a, const MeasureSpec& b, int k);

}  // namespace ergomet
