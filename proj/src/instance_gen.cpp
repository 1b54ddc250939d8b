#include "ccs/instance_gen.hpp"

#include <stdexcept>
#include <string>

#include "ccs/model.hpp"
#include "ccs/rng.hpp"

namespace ccs {

Instance random_graph_instance(const RandomGraphParams& params) {
  if (params.n < 1) throw std::invalid_argument("random_graph_instance: n must be positive");
  if (!(params.r >= 0.0 && params.r <= 1.0))
    throw std::invalid_argument("random_graph_instance: r outside [0, 1]");
  if (!(params.qstar >= 0.0 && params.qstar <= 1.0))
    throw std::invalid_argument("random_graph_instance: qstar outside [0, 1]");

  SplitMix64 rng(params.seed);
  const int n = params.n;

  GraphSpillover gs;
  gs.q.resize(n);
  gs.g = Mat::Zero(n, n);
  gs.r = Mat::Zero(n, n);
  gs.scale = 1.0 / n;

  for (int i = 0; i < n; ++i) gs.q[i] = rng.uniform(0.0, params.qstar);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) gs.g(i, j) = rng.uniform(0.0, params.qstar);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) gs.r(i, j) = rng.bernoulli(params.r) ? 1.0 : 0.0;

  // Cost draws are uniform on [0, 1]; stored coefficients carry the same 1/n
  // factor as the qualities so tight portions c_i / Q_i reduce to
  // draw_i / (q_i + sum g r).
  Vec c(n);
  for (int i = 0; i < n; ++i) c[i] = rng.uniform01() / n;

  Instance inst;
  inst.n = n;
  inst.quality = std::move(gs);
  inst.cost = LinearCost{std::move(c)};
  inst.label = "random-graph n=" + std::to_string(n) + " r=" + std::to_string(params.r) +
               " qstar=" + std::to_string(params.qstar) + " seed=" + std::to_string(params.seed);
  return inst;
}

TreeInstance random_tree_instance(int n, double qstar, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_tree_instance: n must be positive");
  if (!(qstar > 0.0 && qstar <= 1.0))
    throw std::invalid_argument("random_tree_instance: qstar outside (0, 1]");

  SplitMix64 rng(seed);
  TreeInstance tree;
  tree.n = n;
  tree.root = 0;
  tree.parent.assign(n, -1);
  tree.q.resize(n);
  tree.gpar = Vec::Zero(n);
  tree.c.resize(n);
  for (int u = 1; u < n; ++u) tree.parent[u] = rng.uniform_int(0, u - 1);
  for (int u = 0; u < n; ++u) tree.q[u] = rng.uniform_pos(qstar);
  for (int u = 1; u < n; ++u) tree.gpar[u] = rng.uniform_pos(qstar);
  for (int u = 0; u < n; ++u) tree.c[u] = rng.uniform01();
  tree.label = "random-tree n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  return tree;
}

Instance clique_reduction_instance(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw std::invalid_argument("clique_reduction_instance: n must be positive");
  GraphSpillover gs;
  gs.q = Vec::Ones(n);
  gs.g = Mat::Zero(n, n);
  gs.r = Mat::Zero(n, n);
  gs.scale = 1.0 / n;
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n || a == b)
      throw std::invalid_argument("clique_reduction_instance: bad edge " + std::to_string(a) +
                                  "-" + std::to_string(b));
    gs.g(a, b) = gs.g(b, a) = 1.0;
    gs.r(a, b) = gs.r(b, a) = 1.0;
  }
  Instance inst;
  inst.n = n;
  inst.quality = std::move(gs);
  inst.cost = LinearCost{Vec::Constant(n, 1.0 / n)};
  inst.label = "clique-reduction n=" + std::to_string(n);
  return inst;
}

std::pair<Instance, MechanismSpec> counterexample_wta() {
  GraphSpillover gs;
  gs.q = Vec(2);
  gs.q << 1.0, 2.0;
  gs.g = Mat::Zero(2, 2);
  gs.r = Mat::Zero(2, 2);
  gs.scale = 1.0;

  Instance inst;
  inst.n = 2;
  inst.quality = std::move(gs);
  Vec c(2);
  c << 0.5, 0.5;
  inst.cost = LinearCost{std::move(c)};
  inst.label = "wta-counterexample";
  inst.relax_quality_cap = true;  // Q_2 = 2 x_2 exceeds the unit cap
  return {std::move(inst), Wta{}};
}

std::pair<Instance, MechanismSpec> counterexample_tullock() {
  GraphSpillover gs;
  gs.q = Vec(2);
  gs.q << 0.5, 0.0;
  gs.g = Mat::Zero(2, 2);
  gs.r = Mat::Zero(2, 2);
  gs.g(1, 0) = 1.0;  // Q_2 = x_2 * x_1
  gs.r(1, 0) = 1.0;
  gs.scale = 1.0;

  Instance inst;
  inst.n = 2;
  inst.quality = std::move(gs);
  Vec c(2);
  c << 0.25, 0.25;
  inst.cost = LinearCost{std::move(c)};
  inst.label = "tullock-counterexample";
  return {std::move(inst), Tullock{}};
}

}  // namespace ccs
