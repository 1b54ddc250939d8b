#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ccs/mechanisms.hpp"
#include "ccs/tree.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Directed Erdos-Renyi instance family. Draws (per ordered pair for r_ij):
// q_i, g_ij ~ Uniform[0, qstar], r_ij ~ Bernoulli(r), cost draws
// ~ Uniform[0, 1]. The induced game divides both quality and cost by n, so
// the instance stores scale = 1/n and linear costs draw/n; tight portions
// c_i / Q_i then reduce to draw_i / (q_i + sum g r).
struct RandomGraphParams {
  int n = 0;
  double r = 0.0;      // edge probability
  double qstar = 1.0;  // upper support of q and g
  std::uint64_t seed = 0;
};

Instance random_graph_instance(const RandomGraphParams& params);

// Uniform random recursive tree: node i >= 1 attaches to a parent drawn
// uniformly from {0..i-1}; q_u, g_u ~ Uniform(0, qstar], c_u ~ Uniform[0, 1].
TreeInstance random_tree_instance(int n, double qstar, std::uint64_t seed);

// Reduction instance for a simple undirected graph: q_i = 1, spillover
// weight 1 along each edge, scale 1/n, linear costs 1/n. The subset oracle's
// optimum equals (max clique size)^2 / n.
Instance clique_reduction_instance(int n, const std::vector<std::pair<int, int>>& edges);

// Two-player fixture with no PNE under winner-takes-all: Q_1 = x_1,
// Q_2 = 2 x_2, costs 0.5 x. Qualities exceed the unit cap, so the instance
// carries the relaxed-cap flag.
std::pair<Instance, MechanismSpec> counterexample_wta();

// Two-player fixture with no PNE under Tullock: Q_1 = 0.5 x_1,
// Q_2 = x_1 x_2, costs 0.25 x.
std::pair<Instance, MechanismSpec> counterexample_tullock();

}  // namespace ccs
