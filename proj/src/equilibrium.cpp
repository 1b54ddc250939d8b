#include "ccs/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ccs {

namespace {

std::vector<double> effort_grid(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("effort grid step outside (0, 1]");
  std::vector<double> grid;
  const int m = static_cast<int>(std::floor(1.0 / delta + 1e-9));
  grid.reserve(m + 2);
  for (int k = 0; k <= m; ++k) grid.push_back(k * delta);
  if (grid.back() < 1.0 - 1e-12) grid.push_back(1.0);
  else grid.back() = 1.0;
  return grid;
}

bool linear_in_own_effort(const Instance& inst) {
  return inst.is_graph() && inst.has_linear_cost();
}

}  // namespace

void require_solver_friendly(const Instance& inst) {
  if (inst.is_graph() && inst.graph().allow_negative)
    throw std::invalid_argument(
        "instance allows negative weights; effort complementarity is not guaranteed and "
        "solvers refuse it");
}

namespace {

// Largest grid effort whose utility is within br_tol of the maximum.
double grid_best_response(const Instance& inst, const Pra& mech, int i, const Vec& others,
                          const SolverConfig& cfg) {
  const auto grid = effort_grid(cfg.effort_grid_step);
  Vec x = others;
  double best = -std::numeric_limits<double>::infinity();
  for (double z : grid) {
    x[i] = z;
    best = std::max(best, mech.p[i] * quality(inst, i, x) - cost_of(inst, i, z));
  }
  double pick = 0.0;
  for (double z : grid) {
    x[i] = z;
    const double u = mech.p[i] * quality(inst, i, x) - cost_of(inst, i, z);
    if (u >= best - cfg.br_tol) pick = z;
  }
  return pick;
}

}  // namespace

double best_response(const Instance& inst, const Pra& mech, int i, const Vec& others,
                     const SolverConfig& cfg) {
  if (i < 0 || i >= inst.n) throw std::out_of_range("best_response: player index out of range");
  if (linear_in_own_effort(inst)) {
    const auto& gs = inst.graph();
    double spill = 0.0;
    for (int j = 0; j < inst.n; ++j) {
      if (j == i) continue;
      spill += gs.g(i, j) * gs.r(i, j) * others[j];
    }
    const double marginal_q = gs.scale * (gs.q[i] + spill);
    const double c = inst.linear_cost().c[i];
    return (mech.p[i] * marginal_q >= c - cfg.br_tol) ? 1.0 : 0.0;
  }
  return grid_best_response(inst, mech, i, others, cfg);
}

EquilibriumResult best_response_dynamics(const Instance& inst, const Vec& p, const Vec& start,
                                         const SolverConfig& cfg) {
  require_solver_friendly(inst);
  validate_allocation(p, inst.n);
  validate_profile(start, inst.n);
  const Pra mech{p};
  const int max_iter = cfg.resolved_max_iter(inst.n);

  EquilibriumResult res;
  Vec x = start;

  const bool linear = linear_in_own_effort(inst);
  Mat w;
  Vec spill;
  if (linear) {
    w = effective_weights(inst.graph());
    spill = w * x;
  }

  for (int sweep = 0; sweep < max_iter; ++sweep) {
    double max_change = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      double br;
      if (linear) {
        const auto& gs = inst.graph();
        const double marginal_q = gs.scale * (gs.q[i] + spill[i]);
        br = (p[i] * marginal_q >= inst.linear_cost().c[i] - cfg.br_tol) ? 1.0 : 0.0;
      } else {
        br = grid_best_response(inst, mech, i, x, cfg);
      }
      const double change = std::abs(br - x[i]);
      if (change > 0.0) {
        if (linear) spill += w.col(i) * (br - x[i]);
        x[i] = br;
        max_change = std::max(max_change, change);
      }
    }
    if (cfg.keep_trace) res.trace.push_back(x);
    if (max_change <= cfg.br_tol) {
      res.converged = true;
      break;
    }
    ++res.iterations;  // counts sweeps that moved some coordinate
  }

  res.profile = x;
  res.utilities.resize(inst.n);
  const Vec q = qualities(inst, x);
  for (int i = 0; i < inst.n; ++i) res.utilities[i] = p[i] * q[i] - cost_of(inst, i, x[i]);
  res.sw = q.sum();
  if (res.converged && cfg.verify) res.verified = verify_pne(inst, MechanismSpec{mech}, x, cfg);
  return res;
}

EquilibriumResult greatest_equilibrium(const Instance& inst, const Vec& p,
                                       const SolverConfig& cfg) {
  return best_response_dynamics(inst, p, Vec::Ones(inst.n), cfg);
}

bool verify_pne(const Instance& inst, const MechanismSpec& mech, const Vec& x,
                const SolverConfig& cfg) {
  validate_profile(x, inst.n);

  if (const auto* pra = std::get_if<Pra>(&mech); pra && linear_in_own_effort(inst)) {
    // Utility is linear in own effort, so deviations peak at an endpoint.
    const auto& gs = inst.graph();
    const Mat w = effective_weights(gs);
    const Vec spill = w * x;
    for (int i = 0; i < inst.n; ++i) {
      const double coef =
          pra->p[i] * gs.scale * (gs.q[i] + spill[i]) - inst.linear_cost().c[i];
      const double gain = std::max((1.0 - x[i]) * coef, -x[i] * coef);
      if (gain > cfg.deviation_tol) return false;
    }
    return true;
  }

  const auto grid = effort_grid(cfg.effort_grid_step);
  Vec trial = x;
  for (int i = 0; i < inst.n; ++i) {
    const double base = utility(inst, mech, i, x);
    for (double z : grid) {
      trial[i] = z;
      if (utility(inst, mech, i, trial) > base + cfg.deviation_tol) return false;
    }
    trial[i] = x[i];
  }
  return true;
}

std::vector<Vec> find_pne_grid(const Instance& inst, const MechanismSpec& mech, double delta,
                               const SolverConfig& cfg, int workers) {
  const auto grid = effort_grid(delta);
  const auto points = static_cast<std::uint64_t>(grid.size());
  double total_d = 1.0;
  for (int i = 0; i < inst.n; ++i) total_d *= static_cast<double>(points);
  if (total_d > 1e8)
    throw std::domain_error("find_pne_grid: state space exceeds 1e8 profiles");
  const std::uint64_t total = static_cast<std::uint64_t>(total_d);

  SolverConfig dev_cfg = cfg;
  dev_cfg.effort_grid_step = delta;

  auto scan = [&](std::uint64_t lo, std::uint64_t hi, std::vector<Vec>& out) {
    Vec x(inst.n);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t rem = idx;
      for (int i = 0; i < inst.n; ++i) {
        x[i] = grid[rem % points];
        rem /= points;
      }
      if (verify_pne(inst, mech, x, dev_cfg)) out.push_back(x);
    }
  };

  std::vector<Vec> result;
  workers = std::max(1, workers);
  if (workers == 1 || total < 1024) {
    scan(0, total, result);
  } else {
    std::vector<std::vector<Vec>> parts(workers);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int wkr = 0; wkr < workers; ++wkr) {
      const std::uint64_t lo = std::min<std::uint64_t>(wkr * chunk, total);
      const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, total);
      pool.emplace_back([&, lo, hi, wkr] { scan(lo, hi, parts[wkr]); });
    }
    for (auto& t : pool) t.join();
    for (auto& part : parts)
      for (auto& v : part) result.push_back(std::move(v));
  }

  std::sort(result.begin(), result.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  });
  return result;
}

double continuous_best_response_tullock2(const Instance& inst, double x1) {
  if (inst.n != 2) throw std::invalid_argument("tullock2: two-player instances only");
  if (!(x1 > 0.0)) throw std::invalid_argument("tullock2: x1 must be positive");

  const MechanismSpec mech = Tullock{};
  auto f = [&](double z) {
    Vec x(2);
    x[0] = x1;
    x[1] = z;
    return utility(inst, mech, 1, x);
  };

  // Coarse bracket, then golden-section refinement.
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
  double lo = std::max(0.0, (best_k - 1.0) / coarse);
  double hi = std::min(1.0, (best_k + 1.0) / coarse);

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > 1e-6) {
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
  const double z = 0.5 * (lo + hi);
  return f(z) >= best_v ? z : static_cast<double>(best_k) / coarse;
}

}  // namespace ccs
