#include "ccs/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ccs/equilibrium.hpp"
#include "ccs/model.hpp"

namespace ccs {

namespace {

constexpr double kBrTol = 1e-10;      // indifference band, matches the solver
constexpr double kBudgetSlack = 1e-9; // float slack on sum p_i <= 1

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Golden-section maximization on [lo, hi]; assumes unimodality there.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GridB::GridB(double e) : eps(e) {
  if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("GridB: eps outside (0, 1]");
  max_index = static_cast<int>(std::floor(1.0 / e + 1e-9));
}

int GridB::ceil_units(double v) const {
  if (!(v > 0.0)) return 0;
  if (!std::isfinite(v)) return max_index + 1;
  const double k = std::ceil(v / eps - 1e-9);
  if (k > static_cast<double>(max_index)) return max_index + 1;
  return static_cast<int>(k);
}

SolveOutcome gcs(const Instance& inst) {
  if (!inst.is_graph() || !inst.has_linear_cost())
    throw std::invalid_argument("gcs: graph instances with linear costs only");
  require_solver_friendly(inst);
  const double t0 = now_seconds();
  const auto& gs = inst.graph();
  const Vec& c = inst.linear_cost().c;
  const int n = inst.n;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return c[a] != c[b] ? c[a] < c[b] : a < b;
  });

  const Mat w = effective_weights(gs);
  // Member qualities when the whole prefix is active; shrinks as k drops.
  Vec denom(n);
  for (int i = 0; i < n; ++i) denom[i] = gs.scale * (gs.q[i] + w.row(i).sum());

  SolveOutcome out;
  out.algorithm = "gcs";
  for (int k = n; k >= 1; --k) {
    double sum = 0.0;
    bool finite = true;
    for (int t = 0; t < k && finite; ++t) {
      const int i = order[t];
      if (c[i] == 0.0) continue;
      if (denom[i] <= 0.0) {
        finite = false;
        break;
      }
      sum += c[i] / denom[i];
    }
    if (finite && sum <= 1.0 + kBudgetSlack) {
      out.p = Vec::Zero(n);
      out.predicted_sw = 0.0;
      for (int t = 0; t < k; ++t) {
        const int i = order[t];
        out.p[i] = (c[i] == 0.0) ? 0.0 : c[i] / denom[i];
        out.predicted_active.push_back(i);
      }
      std::sort(out.predicted_active.begin(), out.predicted_active.end());
      for (int i : out.predicted_active) out.predicted_sw += denom[i];
      out.elapsed_sec = now_seconds() - t0;
      return out;
    }
    // Drop the most expensive member of the prefix from every denominator.
    const int removed = order[k - 1];
    for (int t = 0; t < k - 1; ++t) {
      const int i = order[t];
      denom[i] -= gs.scale * w(i, removed);
    }
  }

  out.p = Vec::Zero(n);  // no prefix fits: incentivize nobody
  out.predicted_sw = 0.0;
  out.elapsed_sec = now_seconds() - t0;
  return out;
}

double isolated_best_effort(const Instance& inst, int i, double share) {
  if (!(share >= -1e-12 && share <= 1.0 + 1e-12))
    throw std::invalid_argument("isolated_best_effort: share outside [0, 1]");

  if (inst.is_graph() && inst.has_linear_cost()) {
    const auto& gs = inst.graph();
    return (share * gs.scale * gs.q[i] >= inst.linear_cost().c[i] - kBrTol) ? 1.0 : 0.0;
  }

  Vec x = Vec::Zero(inst.n);
  auto f = [&](double z) {
    x[i] = z;
    const double v = share * quality(inst, i, x) - cost_of(inst, i, z);
    x[i] = 0.0;
    return v;
  };

  const int coarse = 100;
  int best_k = 0;
  double best_v = f(0.0);
  for (int k = 1; k <= coarse; ++k) {
    const double v = f(static_cast<double>(k) / coarse);
    if (v > best_v) {
      best_v = v;
      best_k = k;
    }
  }
  const double lo = std::max(0.0, (best_k - 1.0) / coarse);
  const double hi = std::min(1.0, (best_k + 1.0) / coarse);
  double z = golden_max(f, lo, hi, 1e-8);
  double fz = f(z);
  // Ties break toward the larger effort.
  if (f(1.0) >= fz - 1e-12) {
    z = 1.0;
    fz = f(1.0);
  }
  return z;
}

SolveOutcome nsr_solve(const Instance& inst, double eps) {
  require_solver_friendly(inst);
  const double t0 = now_seconds();
  const GridB grid(eps);
  const int n = inst.n;
  const int m = grid.max_index;

  // Item profits: isolated quality at the effort the share induces.
  std::vector<std::vector<double>> profit(n, std::vector<double>(m + 1));
  Vec x = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= m; ++k) {
      x[i] = isolated_best_effort(inst, i, grid.value(k));
      profit[i][k] = quality(inst, i, x);
      x[i] = 0.0;
    }
  }

  // MCKP over capacity m: one share level per player. Ties prefer lower
  // total weight, then the lower level (ascending scan keeps the first).
  std::vector<double> dp(m + 1, 0.0), ndp(m + 1);
  std::vector<int> wt(m + 1, 0), nwt(m + 1);
  std::vector<std::vector<int>> choice(n, std::vector<int>(m + 1, 0));
  for (int i = 0; i < n; ++i) {
    for (int cap = 0; cap <= m; ++cap) {
      double best = -std::numeric_limits<double>::infinity();
      int best_w = 0, best_k = 0;
      for (int k = 0; k <= cap; ++k) {
        const double v = dp[cap - k] + profit[i][k];
        const int tw = wt[cap - k] + k;
        if (v > best || (v == best && tw < best_w)) {
          best = v;
          best_w = tw;
          best_k = k;
        }
      }
      ndp[cap] = best;
      nwt[cap] = best_w;
      choice[i][cap] = best_k;
    }
    dp.swap(ndp);
    wt.swap(nwt);
  }

  SolveOutcome out;
  out.algorithm = "nsr";
  out.p = Vec::Zero(n);
  int cap = m;
  for (int i = n - 1; i >= 0; --i) {
    const int k = choice[i][cap];
    out.p[i] = grid.value(k);
    cap -= k;
  }

  SolverConfig cfg;
  cfg.verify = false;
  const EquilibriumResult eq = greatest_equilibrium(inst, out.p, cfg);
  out.predicted_sw = eq.sw;
  for (int i = 0; i < n; ++i)
    if (eq.profile[i] >= 1.0 - 1e-9) out.predicted_active.push_back(i);
  out.elapsed_sec = now_seconds() - t0;
  return out;
}

ScbaResult scba(const std::vector<ValueTable>& children, const GridB& grid) {
  const int m = grid.max_index;
  ScbaResult res;
  for (int xu = 0; xu < 2; ++xu) {
    res.t[xu].assign(m + 1, 0.0);
    res.split[xu].assign(children.size(), std::vector<int>(m + 1, 0));
    auto& t = res.t[xu];
    for (std::size_t ci = 0; ci < children.size(); ++ci) {
      const auto& v = children[ci][xu];
      auto& s = res.split[xu][ci];
      // Decreasing budgets: entries below b still hold the pre-child values.
      for (int b = m; b >= 0; --b) {
        double best = -std::numeric_limits<double>::infinity();
        int best_split = 0;
        for (int bp = 0; bp <= b; ++bp) {
          const double val = t[b - bp] + v[bp];
          if (val > best) {
            best = val;
            best_split = bp;
          }
        }
        t[b] = best;
        s[b] = best_split;
      }
    }
  }
  return res;
}

namespace {

std::vector<int> post_order(const TreeInstance& tree,
                            const std::vector<std::vector<int>>& kids) {
  std::vector<int> order;
  order.reserve(tree.n);
  // Iterative DFS; the reversed child push keeps children in index order.
  std::vector<std::pair<int, bool>> stack{{tree.root, false}};
  while (!stack.empty()) {
    auto [u, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(u);
      continue;
    }
    stack.emplace_back(u, true);
    for (auto it = kids[u].rbegin(); it != kids[u].rend(); ++it)
      stack.emplace_back(*it, false);
  }
  return order;
}

double node_quality(const TreeInstance& tree, int u, int x_par) {
  return tree.q[u] + tree.gpar[u] * x_par;
}

}  // namespace

HopTables hop_tables(const TreeInstance& tree, double eps) {
  validate(tree);
  HopTables tb{GridB(eps), {}, {}, {}, {}};
  const int m = tb.grid.max_index;
  const auto kids = children_of(tree);

  tb.v.resize(tree.n);
  tb.x_star.resize(tree.n);
  tb.split.resize(tree.n);
  tb.rho_units.resize(tree.n);

  for (int u = 0; u < tree.n; ++u) {
    for (int xp = 0; xp < 2; ++xp) {
      const double denom = node_quality(tree, u, xp);
      if (denom <= 0.0)
        tb.rho_units[u][xp] = (tree.c[u] == 0.0) ? 0 : m + 1;
      else
        tb.rho_units[u][xp] = tb.grid.ceil_units(tree.c[u] / denom);
    }
  }

  for (int u : post_order(tree, kids)) {
    std::vector<ValueTable> child_tables;
    child_tables.reserve(kids[u].size());
    for (int v : kids[u]) child_tables.push_back(tb.v[v]);
    ScbaResult sc = scba(child_tables, tb.grid);
    tb.split[u] = std::move(sc.split);

    for (int xp = 0; xp < 2; ++xp) {
      auto& v_row = tb.v[u][xp];
      auto& x_row = tb.x_star[u][xp];
      v_row.assign(m + 1, 0.0);
      x_row.assign(m + 1, 0);
      const int rho = tb.rho_units[u][xp];
      for (int b = 0; b <= m; ++b) {
        const double skip = sc.t[0][b];
        if (b >= rho) {
          const double take = node_quality(tree, u, xp) + sc.t[1][b - rho];
          if (take >= skip) {  // ties activate, matching tie-break-high play
            v_row[b] = take;
            x_row[b] = 1;
          } else {
            v_row[b] = skip;
          }
        } else {
          v_row[b] = skip;
        }
      }
    }
  }
  return tb;
}

namespace {

struct ExtractState {
  Vec p;
  std::vector<std::uint8_t> active;
};

void extract_rec(const TreeInstance& tree, const HopTables& tb,
                 const std::vector<std::vector<int>>& kids, int u, int budget, int x_par,
                 ExtractState& st) {
  const int x_u = tb.x_star[u][x_par][budget];
  st.active[u] = static_cast<std::uint8_t>(x_u);
  const int own = x_u ? tb.rho_units[u][x_par] : 0;
  st.p[u] = tb.grid.value(own);
  int rem = budget - own;
  // Reverse order exactly rewinds the sequential convolution.
  for (int ci = static_cast<int>(kids[u].size()) - 1; ci >= 0; --ci) {
    const int b_child = tb.split[u][x_u][ci][rem];
    extract_rec(tree, tb, kids, kids[u][ci], b_child, x_u, st);
    rem -= b_child;
  }
}

ExtractState extract_full(const TreeInstance& tree, const HopTables& tb) {
  const auto kids = children_of(tree);
  ExtractState st{Vec::Zero(tree.n), std::vector<std::uint8_t>(tree.n, 0)};
  extract_rec(tree, tb, kids, tree.root, tb.grid.max_index, 0, st);
  return st;
}

}  // namespace

Vec hop_extract(const TreeInstance& tree, const HopTables& tables) {
  return extract_full(tree, tables).p;
}

SolveOutcome hop_solve(const TreeInstance& tree, double eps) {
  const double t0 = now_seconds();
  const HopTables tb = hop_tables(tree, eps);
  const ExtractState st = extract_full(tree, tb);

  SolveOutcome out;
  out.algorithm = "hop";
  out.p = st.p;
  out.predicted_sw = 0.0;
  for (int u = 0; u < tree.n; ++u) {
    if (!st.active[u]) continue;
    out.predicted_active.push_back(u);
    const int x_par = (u == tree.root) ? 0 : st.active[tree.parent[u]];
    out.predicted_sw += node_quality(tree, u, x_par);
  }
  out.elapsed_sec = now_seconds() - t0;
  return out;
}

SolveOutcome brute_force_subset_oracle(const Instance& inst, std::optional<double> eps) {
  if (!inst.is_graph() || !inst.has_linear_cost())
    throw std::invalid_argument("subset oracle: graph instances with linear costs only");
  require_solver_friendly(inst);
  if (inst.n > 20) throw std::domain_error("subset oracle: n > 20");
  const double t0 = now_seconds();
  const int n = inst.n;
  const Vec& c = inst.linear_cost().c;
  std::optional<GridB> grid;
  if (eps) grid.emplace(*eps);

  double best_sw = 0.0;
  std::uint32_t best_mask = 0;
  Vec best_p = Vec::Zero(n);

  Vec x(n);
  Vec portions(n);
  const std::uint32_t total = 1u << n;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1u ? 1.0 : 0.0;
    double sw = 0.0;
    double spent = 0.0;
    int units = 0;
    bool feasible = true;
    for (int i = 0; i < n && feasible; ++i) {
      if (!((mask >> i) & 1u)) continue;
      const double qi = quality(inst, i, x);
      double tight = 0.0;
      if (c[i] > 0.0) {
        if (qi <= 0.0) {
          feasible = false;
          break;
        }
        tight = c[i] / qi;
      }
      if (grid) {
        units += grid->ceil_units(tight);
        if (units > grid->max_index) feasible = false;
        portions[i] = grid->value(std::min(grid->ceil_units(tight), grid->max_index));
      } else {
        spent += tight;
        if (spent > 1.0 + kBudgetSlack) feasible = false;
        portions[i] = tight;
      }
      sw += qi;
    }
    if (feasible && sw > best_sw) {
      best_sw = sw;
      best_mask = mask;
      for (int i = 0; i < n; ++i) best_p[i] = ((mask >> i) & 1u) ? portions[i] : 0.0;
    }
  }

  SolveOutcome out;
  out.algorithm = "oracle-subset";
  out.p = best_p;
  out.predicted_sw = best_sw;
  for (int i = 0; i < n; ++i)
    if ((best_mask >> i) & 1u) out.predicted_active.push_back(i);
  out.elapsed_sec = now_seconds() - t0;
  return out;
}

SolveOutcome brute_force_subset_oracle(const TreeInstance& tree, std::optional<double> eps) {
  SolveOutcome out = brute_force_subset_oracle(to_instance(tree), eps);
  return out;
}

SolveOutcome brute_force_allocation_oracle(const Instance& inst, double eps) {
  const GridB grid(eps);
  const int n = inst.n;
  const int m = grid.max_index;
  double space = 1.0;
  for (int i = 0; i < n; ++i) space *= static_cast<double>(m + 1);
  if (space > 1e7) throw std::domain_error("allocation oracle: grid space exceeds 1e7");

  const double t0 = now_seconds();
  SolverConfig cfg;
  cfg.verify = false;

  SolveOutcome out;
  out.algorithm = "oracle-alloc";
  out.p = Vec::Zero(n);
  out.predicted_sw = -1.0;

  std::vector<int> units(n, 0);
  Vec p = Vec::Zero(n);
  while (true) {
    int sum = 0;
    for (int i = 0; i < n; ++i) sum += units[i];
    if (sum <= m) {
      for (int i = 0; i < n; ++i) p[i] = grid.value(units[i]);
      const EquilibriumResult eq = greatest_equilibrium(inst, p, cfg);
      // Strict improvement keeps the lexicographically smallest optimum.
      if (eq.sw > out.predicted_sw) {
        out.predicted_sw = eq.sw;
        out.p = p;
        out.predicted_active.clear();
        for (int i = 0; i < n; ++i)
          if (eq.profile[i] >= 1.0 - 1e-9) out.predicted_active.push_back(i);
      }
    }
    // Odometer: last coordinate spins fastest, so p ascends lexicographically.
    int pos = n - 1;
    while (pos >= 0 && units[pos] == m) units[pos--] = 0;
    if (pos < 0) break;
    ++units[pos];
  }
  out.elapsed_sec = now_seconds() - t0;
  return out;
}

Vec equal_allocation(int n) {
  if (n < 1) throw std::invalid_argument("equal_allocation: n must be positive");
  return Vec::Constant(n, 1.0 / n);
}

double beta_of(const Instance& inst) {
  if (!inst.is_graph()) throw std::invalid_argument("beta_of: graph instances only");
  const auto& gs = inst.graph();
  double beta = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    double spill = 0.0;
    for (int j = 0; j < inst.n; ++j)
      if (j != i) spill += gs.g(i, j) * gs.r(i, j);
    if (spill <= 0.0) continue;
    if (gs.q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    beta = std::max(beta, spill / gs.q[i]);
  }
  return beta;
}

}  // namespace ccs
