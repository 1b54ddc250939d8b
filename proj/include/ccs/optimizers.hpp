#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccs/tree.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Discrete budget grid {k * eps : k = 0..floor(1/eps)}. Budgets are handled
// as integer multiples of eps throughout the solvers so no accumulation
// error is possible.
struct GridB {
  double eps;
  int max_index;

  explicit GridB(double e);

  double value(int k) const { return k * eps; }

  // Smallest k with k*eps >= v, up to 1e-9 grid slack; values above the grid
  // return max_index + 1 (infeasible at any budget).
  int ceil_units(double v) const;
};

struct SolveOutcome {
  Vec p;
  std::vector<int> predicted_active;
  double predicted_sw = 0.0;
  std::string algorithm;
  double elapsed_sec = 0.0;
};

// Greedy cost selection for graph instances with linear costs: sort players
// by cost ascending, then find the largest prefix whose tight portions
// p_i = c_i / Q_i(x_prefix) fit in the unit budget. Falls back to the
// all-zero allocation when no prefix fits. O(N^2) via incremental
// denominator maintenance.
SolveOutcome gcs(const Instance& inst);

// Effort maximizing share * Q_i(z, 0_{-i}) - c_i(z) over z in [0, 1].
// Linear objectives resolve to {0, 1} with ties toward 1; otherwise the
// maximizer is grid-bracketed and refined by golden-section search.
double isolated_best_effort(const Instance& inst, int i, double share);

// No-spillovers relaxation solver: multiple-choice knapsack over classes =
// players and items = grid shares, profit = isolated quality at the induced
// effort. Exact over B(eps)^N; ties resolve toward lower total weight, then
// lower player index. O(N / eps^2).
SolveOutcome nsr_solve(const Instance& inst, double eps);

// --- Tree dynamic program ----------------------------------------------

// Value tables indexed [x in {0,1}][budget units]. For V the first index is
// the parent effort; for T it is the node's own effort.
using ValueTable = std::array<std::vector<double>, 2>;

struct ScbaResult {
  ValueTable t;  // t[x_u][b]: best total from the children's subtrees
  // split[x_u][child][b]: budget units granted to `child` when the children
  // processed so far share b units
  std::array<std::vector<std::vector<int>>, 2> split;
};

// Sequential children budget allocation: convolves the child value tables
// one at a time. Budgets iterate in decreasing order so the in-place update
// reads pre-child values only.
ScbaResult scba(const std::vector<ValueTable>& children, const GridB& grid);

struct HopTables {
  GridB grid;
  std::vector<ValueTable> v;                                  // v[u][x_par][b]
  std::vector<std::array<std::vector<std::uint8_t>, 2>> x_star;  // x_star[u][x_par][b]
  std::vector<std::array<std::vector<std::vector<int>>, 2>> split;
  std::vector<std::array<int, 2>> rho_units;  // ceil-rounded incentive costs
};

// Bottom-up pass of the tree DP; fills every table in post-order.
HopTables hop_tables(const TreeInstance& tree, double eps);

// Top-down extraction; children are visited in reverse order, exactly
// reversing the sequential convolution.
Vec hop_extract(const TreeInstance& tree, const HopTables& tables);

// Optimal allocation over B(eps)^N for tree instances: post-order DP with
// SCBA child convolution plus top-down extraction. O(N / eps^2).
SolveOutcome hop_solve(const TreeInstance& tree, double eps);

// --- Oracles and baselines ----------------------------------------------

// Enumerates every activation subset S (members at effort 1, others at 0),
// prices each member at its tight portion c_i / Q_i(x_S) (ceil-rounded to
// the grid when eps is given), and returns the feasible S of maximum
// welfare. Guarded to n <= 20.
SolveOutcome brute_force_subset_oracle(const Instance& inst,
                                       std::optional<double> eps = std::nullopt);
SolveOutcome brute_force_subset_oracle(const TreeInstance& tree,
                                       std::optional<double> eps = std::nullopt);

// Ground truth for the allocation design problem: enumerates every
// p in B(eps)^n with sum <= 1, solves the induced equilibrium, and returns
// the maximum-welfare allocation (ties: lexicographically smallest p).
// Guarded to (1/eps + 1)^n <= 1e7.
SolveOutcome brute_force_allocation_oracle(const Instance& inst, double eps);

// p_i = 1/n for everyone.
Vec equal_allocation(int n);

// Tight spillover bound for graph instances: max_i of (incoming spillover
// mass) / q_i. Infinity when some q_i = 0 receives positive spillover.
double beta_of(const Instance& inst);

}  // namespace ccs
