#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ergomet/measures.hpp"
#include "ergomet/symbolic.hpp"

namespace ergomet {

enum class BesicovitchForm { Average, DensityThreshold };

// Sentinel exponent meaning "no disagreement within the resolution window"
// (Cantor distance 0).
inline constexpr std::uint8_t kCantorAgree = 255;

// exps[j] = offset of the first disagreement between the orbits of p and q at
// position j, capped at `resolution`; the Cantor distance at j is 2^-exps[j]
// (0 for capped entries).
std::vector<std::uint8_t> cantor_exponents(const Point& p, const Point& q, std::uint64_t n,
                                           int resolution = 64);

struct BesicovitchEstimate {
    std::uint64_t horizon = 0;
    double value = 0.0;
    BesicovitchForm form = BesicovitchForm::Average;
    // (n_k, estimate using data up to n_k) for every usable n_k; the reported
    // value is the max over the trace, the finite surrogate for the limsup.
    std::vector<std::pair<std::uint64_t, double>> trace;
};

// Orbit-averaged Cantor distance maximized over usable n_k.
BesicovitchEstimate besicovitch(const Point& p, const Point& q, const Subsequence& ns,
                                std::uint64_t horizon, int resolution = 64);

// Density-threshold form: inf{delta > 0 : max_k |{j < n_k : d_j >= delta}|/n_k < delta}.
BesicovitchEstimate besicovitch_density(const Point& p, const Point& q, const Subsequence& ns,
                                        std::uint64_t horizon, int resolution = 64);

struct GenericityReport {
    int k = 0;
    double tol = 0.0;
    std::vector<std::pair<std::uint64_t, double>> discrepancies;  // (n_k, TV at n_k)
    bool verdict = false;
};

enum class CouplingRule { Independent, Monotone, MaximalPerStep };

const char* coupling_rule_name(CouplingRule r);

// Seeded orbit of a Bernoulli / irreducible Markov / periodic measure.
// `length` is the horizon the caller intends to read; generators keep
// producing symbols past it on demand.
Point sample_generic(const MeasureSpec& m, std::uint64_t seed, std::uint64_t length);

// Jointly sampled orbits over a common alphabet. Each component is marginally
// distributed by its spec; the rule fixes the per-step dependence.
std::vector<Point> sample_coupled(const std::vector<MeasureSpec>& specs, CouplingRule rule,
                                  std::uint64_t seed, std::uint64_t length);

GenericityReport quasigeneric_check(const Point& p, const MeasureSpec& m, const Subsequence& ns,
                                    std::uint64_t horizon, int k, double tol);

}  // namespace ergomet
