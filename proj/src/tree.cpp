#include "ccs/tree.hpp"

#include <string>

#include "ccs/model.hpp"

namespace ccs {

void validate(const TreeInstance& tree) {
  if (tree.n < 1) throw ValidationError("n", "must be at least 1");
  if (static_cast<int>(tree.parent.size()) != tree.n)
    throw ValidationError("parent", "length != n");
  if (static_cast<int>(tree.q.size()) != tree.n) throw ValidationError("q", "length != n");
  if (static_cast<int>(tree.gpar.size()) != tree.n) throw ValidationError("gpar", "length != n");
  if (static_cast<int>(tree.c.size()) != tree.n) throw ValidationError("c", "length != n");
  if (tree.root < 0 || tree.root >= tree.n) throw ValidationError("root", "index out of range");
  if (tree.parent[tree.root] != -1) throw ValidationError("parent", "root must have parent -1");

  int roots = 0;
  for (int u = 0; u < tree.n; ++u) {
    const int p = tree.parent[u];
    if (p == -1) {
      ++roots;
      continue;
    }
    if (p < 0 || p >= tree.n || p == u)
      throw ValidationError("parent[" + std::to_string(u) + "]", "invalid parent index");
    if (tree.q[u] < 0.0) throw ValidationError("q[" + std::to_string(u) + "]", "negative");
    if (tree.gpar[u] < 0.0) throw ValidationError("gpar[" + std::to_string(u) + "]", "negative");
    if (tree.c[u] < 0.0) throw ValidationError("c[" + std::to_string(u) + "]", "negative");
  }
  if (roots != 1) throw ValidationError("parent", "expected exactly one root");

  // Walking up from any node must reach the root without revisits.
  for (int u = 0; u < tree.n; ++u) {
    int steps = 0;
    int v = u;
    while (v != tree.root) {
      v = tree.parent[v];
      if (++steps > tree.n)
        throw ValidationError("parent", "cycle detected at node " + std::to_string(u));
    }
  }
}

std::vector<std::vector<int>> children_of(const TreeInstance& tree) {
  std::vector<std::vector<int>> kids(tree.n);
  for (int u = 0; u < tree.n; ++u)
    if (u != tree.root) kids[tree.parent[u]].push_back(u);
  return kids;
}

Instance to_instance(const TreeInstance& tree) {
  GraphSpillover gs;
  gs.q = tree.q;
  gs.g = Mat::Zero(tree.n, tree.n);
  gs.r = Mat::Zero(tree.n, tree.n);
  gs.scale = 1.0;
  for (int u = 0; u < tree.n; ++u) {
    if (u == tree.root) continue;
    gs.g(u, tree.parent[u]) = tree.gpar[u];
    gs.r(u, tree.parent[u]) = 1.0;
  }
  Instance inst;
  inst.n = tree.n;
  inst.quality = gs;
  inst.cost = LinearCost{tree.c};
  inst.label = tree.label;
  inst.relax_quality_cap = true;  // q_u + gpar_u may exceed 1
  return inst;
}

TreeInstance tree_from_instance(const Instance& inst) {
  if (!inst.is_graph()) throw ValidationError("quality", "not a tree: graph model required");
  if (!inst.has_linear_cost()) throw ValidationError("cost", "not a tree: linear costs required");
  const auto& gs = inst.graph();

  TreeInstance tree;
  tree.n = inst.n;
  tree.parent.assign(inst.n, -1);
  tree.q = gs.scale * gs.q;
  tree.gpar = Vec::Zero(inst.n);
  tree.c = inst.linear_cost().c;
  tree.label = inst.label;

  int roots = 0;
  for (int u = 0; u < inst.n; ++u) {
    int parent = -1;
    for (int j = 0; j < inst.n; ++j) {
      if (j == u || gs.r(u, j) == 0.0) continue;
      if (parent != -1)
        throw ValidationError("quality.r",
                              "not a tree: node " + std::to_string(u) + " has several parents");
      parent = j;
    }
    tree.parent[u] = parent;
    if (parent == -1) {
      tree.root = u;
      ++roots;
    } else {
      tree.gpar[u] = gs.scale * gs.g(u, parent);
    }
  }
  if (roots != 1)
    throw ValidationError("quality.r", "not a tree: expected exactly one root, found " +
                                           std::to_string(roots));
  validate(tree);  // catches cycles among the remaining links
  return tree;
}

}  // namespace ccs
