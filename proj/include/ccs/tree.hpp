#pragma once

#include <string>
#include <vector>

#include "ccs/types.hpp"

namespace ccs {

// Rooted-tree instance: every node but the root receives spillover from
// exactly one parent, Q_u(x_u, x_par) = x_u * (q_u + gpar_u * x_par), with
// linear costs.
struct TreeInstance {
  int n = 0;
  int root = 0;
  std::vector<int> parent;  // parent[root] == -1
  Vec q;
  Vec gpar;  // spillover weight from the parent; unused at the root
  Vec c;     // linear cost coefficients
  std::string label;
};

// Throws ValidationError unless the parent links form a single rooted tree
// with conformant vectors.
void validate(const TreeInstance& tree);

// Children grouped by node, in ascending index order.
std::vector<std::vector<int>> children_of(const TreeInstance& tree);

// Graph-spillover view of the tree (scale 1, linear costs). Tree fixtures may
// exceed the Q <= 1 cap, so the result carries the relaxed-cap flag.
Instance to_instance(const TreeInstance& tree);

// Interprets a graph instance as a rooted tree: each node must have at most
// one incoming spillover edge and exactly one node none. Throws
// ValidationError with a "not a tree" diagnostic otherwise. The instance
// scale is folded into q and gpar.
TreeInstance tree_from_instance(const Instance& inst);

}  // namespace ccs
