#pragma once

#include <cstdint>

#include "ccs/types.hpp"

namespace ccs {

/// Quality of player i at profile x.
double quality(const Instance& inst, int i, const Vec& x);

/// All player qualities at once.
Vec qualities(const Instance& inst, const Vec& x);

/// SW(x) = sum_i Q_i(x).
double social_welfare(const Instance& inst, const Vec& x);

/// Cost of player i at the given effort level.
double cost_of(const Instance& inst, int i, double effort);

struct ComplementarityReport {
  bool pass = false;
  bool vacuous = false;  // n < 2: nothing to check
  double worst_value = 0.0;
  Vec worst_point;
  int worst_i = -1;
  int worst_j = -1;
};

// Central finite-difference probe of the cross-partials d2 Q_i / dx_i dx_j at
// random interior points. Passes iff the most negative estimate stays above
// -tol. Deterministic for a fixed seed.
ComplementarityReport check_complementarity(const Instance& inst, int samples,
                                            double h, std::uint64_t seed,
                                            double tol = 1e-8);

}  // namespace ccs
