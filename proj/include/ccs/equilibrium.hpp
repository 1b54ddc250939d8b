#pragma once

#include <vector>

#include "ccs/mechanisms.hpp"
#include "ccs/types.hpp"

namespace ccs {

struct SolverConfig {
  double effort_grid_step = 0.01;  // delta for grid best responses and deviations
  double br_tol = 1e-10;
  double deviation_tol = 1e-9;
  int max_iter = 0;  // 0 resolves to 10 * n + 100 sweeps
  bool keep_trace = false;
  bool verify = true;  // run verify_pne on the converged profile

  int resolved_max_iter(int n) const { return max_iter > 0 ? max_iter : 10 * n + 100; }
};

struct EquilibriumResult {
  Vec profile;
  Vec utilities;
  double sw = 0.0;
  int iterations = 0;  // completed best-response sweeps
  bool converged = false;
  bool verified = false;
  std::vector<Vec> trace;  // profile after each sweep when keep_trace is set
};

// Solvers require effort complementarity; for the graph family that means
// nonnegative weights, so instances with allow_negative are refused.
void require_solver_friendly(const Instance& inst);

// Best response of player i to the efforts in `others` under PRA. Utilities
// linear in own effort resolve in closed form to {0, 1}; anything else is
// maximized over the effort grid. Ties within br_tol break toward the
// largest effort.
double best_response(const Instance& inst, const Pra& mech, int i, const Vec& others,
                     const SolverConfig& cfg = {});

// Round-robin best-response sweeps from the given start profile until a full
// sweep moves no coordinate by more than br_tol.
EquilibriumResult best_response_dynamics(const Instance& inst, const Vec& p,
                                         const Vec& start, const SolverConfig& cfg = {});

// Greatest equilibrium of the PRA-induced game: dynamics from the all-ones
// profile. The sweep trace is componentwise non-increasing on valid
// instances.
EquilibriumResult greatest_equilibrium(const Instance& inst, const Vec& p,
                                       const SolverConfig& cfg = {});

// True iff no unilateral grid deviation (plus the current effort) improves
// any player's utility by more than deviation_tol.
bool verify_pne(const Instance& inst, const MechanismSpec& mech, const Vec& x,
                const SolverConfig& cfg = {});

// Exhaustive scan of the delta-grid strategy space; returns every grid
// profile that is a grid-PNE, in lexicographic order. An empty list
// certifies non-existence on the grid (the continuum is argued separately).
// Refuses state spaces beyond 1e8 profiles.
std::vector<Vec> find_pne_grid(const Instance& inst, const MechanismSpec& mech,
                               double delta, const SolverConfig& cfg = {},
                               int workers = 1);

// Continuous best response of player 2 under Tullock for two-player
// instances, via golden-section search (tolerance 1e-6) seeded from a coarse
// grid bracket. Requires x1 > 0.
double continuous_best_response_tullock2(const Instance& inst, double x1);

}  // namespace ccs
