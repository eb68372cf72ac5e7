#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ergomet/measures.hpp"
#include "ergomet/orbit_metrics.hpp"
#include "ergomet/symbolic.hpp"

namespace ergomet {

// Finite-horizon empirical distribution over tuples of k-blocks read
// simultaneously along the orbits of a tuple of points.
struct EmpiricalJoining {
    std::vector<Point> components;
    std::uint64_t n = 0;  // largest usable n_k
    int k = 0;
    int alphabet = 0;
    std::map<std::vector<std::size_t>, double> dist;  // per-component word codes -> mass
};

EmpiricalJoining empirical_joining(const std::vector<Point>& points, const Subsequence& ns,
                                   std::uint64_t horizon, int k);

// Marginal of the joining onto one component; by construction it equals
// empirical_measure(component, n, k) bit for bit.
BlockDistribution joining_marginal(const EmpiricalJoining& j, int component);

// TV distance to the same construction started one shift later.
double invariance_defect(const EmpiricalJoining& j);

struct FactorConditionReport {
    std::vector<int> cylinder;
    double delta = 0.0;
    std::uint64_t n = 0;
    double symdiff_density = 0.0;   // exactly one orbit enters the cylinder
    double mismatch_density = 0.0;  // Cantor distance >= delta
    // Per-index containment: every symdiff event is a mismatch event. Holds
    // whenever delta <= 2^-(|B|-1), since cylinders are determined by the
    // first |B| symbols.
    std::uint64_t pointwise_violations = 0;
    bool inequality_holds = false;
};

FactorConditionReport factor_condition(const Point& x, const Point& xN, const std::vector<int>& B,
                                       double delta, const Subsequence& ns, std::uint64_t horizon);

}  // namespace ergomet
