#include "ccs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccs/rng.hpp"

namespace ccs {

namespace {

void validate_graph(const GraphSpillover& gs, int n) {
  if (static_cast<int>(gs.q.size()) != n) throw ValidationError("quality.q", "length != n");
  if (gs.g.rows() != n || gs.g.cols() != n) throw ValidationError("quality.g", "shape != n x n");
  if (gs.r.rows() != n || gs.r.cols() != n) throw ValidationError("quality.r", "shape != n x n");
  if (!(gs.scale > 0.0)) throw ValidationError("quality.scale", "must be positive");
  for (int i = 0; i < n; ++i) {
    if (!gs.allow_negative && gs.q[i] < 0.0)
      throw ValidationError("quality.q[" + std::to_string(i) + "]", "negative");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;  // diagonal is ignored
      if (!gs.allow_negative && gs.g(i, j) < 0.0)
        throw ValidationError("quality.g[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                              "negative");
      const double rij = gs.r(i, j);
      if (rij != 0.0 && rij != 1.0)
        throw ValidationError("quality.r[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                              "not a 0/1 bit");
    }
  }
}

void validate_scaling(const ScalingLaw& sl) {
  if (sl.a < 0.0 || sl.b < 0.0) throw ValidationError("quality.a", "a, b must be nonnegative");
  if (sl.a + sl.b > 1.0 + 1e-12) throw ValidationError("quality.b", "a + b must not exceed 1");
  if (!(sl.alpha > 0.0)) throw ValidationError("quality.alpha", "must be positive");
  if (!(sl.dc > 0.0)) throw ValidationError("quality.dc", "must be positive");
  if (!(sl.d > sl.alpha)) throw ValidationError("quality.d", "must exceed alpha");
  // Lower end of the quality range: Q_i/x_i at vanishing effort is
  // a + b (1 - (dc/d)^alpha); dc must be scaled so this stays nonnegative.
  if (sl.a + sl.b * (1.0 - std::pow(sl.dc / sl.d, sl.alpha)) < -1e-9)
    throw ValidationError("quality.dc", "quality goes negative at low effort");
}

void validate_cost(const CostModel& cost, int n) {
  if (const auto* lin = std::get_if<LinearCost>(&cost)) {
    if (static_cast<int>(lin->c.size()) != n) throw ValidationError("cost.c", "length != n");
    for (int i = 0; i < n; ++i)
      if (!(lin->c[i] >= 0.0 && lin->c[i] <= 1.0 + 1e-12))
        throw ValidationError("cost.c[" + std::to_string(i) + "]", "outside [0, 1]");
  } else {
    const auto& pw = std::get<PowerCost>(cost);
    if (static_cast<int>(pw.c.size()) != n) throw ValidationError("cost.c", "length != n");
    if (!(pw.exponent >= 1.0)) throw ValidationError("cost.exponent", "must be >= 1");
    for (int i = 0; i < n; ++i)
      if (pw.c[i] < 0.0) throw ValidationError("cost.c[" + std::to_string(i) + "]", "negative");
  }
}

}  // namespace

void validate(const Instance& inst) {
  if (inst.n < 1) throw ValidationError("n", "must be at least 1");
  bool allow_negative = false;
  if (inst.is_graph()) {
    validate_graph(inst.graph(), inst.n);
    allow_negative = inst.graph().allow_negative;
  } else {
    validate_scaling(std::get<ScalingLaw>(inst.quality));
  }
  validate_cost(inst.cost, inst.n);

  // Spot check Q in [0, 1] at all-ones, the maximizer under nonnegative
  // spillovers. Meaningless for instances that allow negative weights.
  if (!inst.relax_quality_cap && !allow_negative) {
    const Vec ones = Vec::Ones(inst.n);
    for (int i = 0; i < inst.n; ++i) {
      const double v = quality(inst, i, ones);
      if (v < -1e-9 || v > 1.0 + 1e-9)
        throw ValidationError("quality", "Q_" + std::to_string(i) +
                                             "(all-ones) = " + std::to_string(v) +
                                             " outside [0, 1]");
    }
  }
}

Mat effective_weights(const GraphSpillover& gs) {
  Mat w = gs.g.cwiseProduct(gs.r);
  w.diagonal().setZero();
  return w;
}

double quality(const Instance& inst, int i, const Vec& x) {
  if (i < 0 || i >= inst.n) throw std::out_of_range("quality: player index out of range");
  if (inst.is_graph()) {
    const auto& gs = inst.graph();
    double s = 0.0;
    for (int j = 0; j < inst.n; ++j) {
      if (j == i) continue;
      s += gs.g(i, j) * gs.r(i, j) * x[j];
    }
    return gs.scale * x[i] * (gs.q[i] + s);
  }
  const auto& sl = std::get<ScalingLaw>(inst.quality);
  const double total = x.sum() + sl.d;
  if (total <= 0.0) throw std::domain_error("quality: nonpositive data volume");
  return x[i] * (sl.a + sl.b * (1.0 - std::pow(sl.dc / total, sl.alpha)));
}

Vec qualities(const Instance& inst, const Vec& x) {
  Vec out(inst.n);
  if (inst.is_graph()) {
    const auto& gs = inst.graph();
    for (int i = 0; i < inst.n; ++i) {
      double s = 0.0;
      for (int j = 0; j < inst.n; ++j) {
        if (j == i) continue;
        s += gs.g(i, j) * gs.r(i, j) * x[j];
      }
      out[i] = gs.scale * x[i] * (gs.q[i] + s);
    }
    return out;
  }
  for (int i = 0; i < inst.n; ++i) out[i] = quality(inst, i, x);
  return out;
}

double social_welfare(const Instance& inst, const Vec& x) {
  double sw = 0.0;
  for (int i = 0; i < inst.n; ++i) sw += quality(inst, i, x);
  return sw;
}

double cost_of(const Instance& inst, int i, double effort) {
  if (i < 0 || i >= inst.n) throw std::out_of_range("cost_of: player index out of range");
  if (!(effort >= -1e-12 && effort <= 1.0 + 1e-12))
    throw std::invalid_argument("cost_of: effort outside [0, 1]");
  if (const auto* lin = std::get_if<LinearCost>(&inst.cost)) return lin->c[i] * effort;
  const auto& pw = std::get<PowerCost>(inst.cost);
  return pw.c[i] * std::pow(effort, pw.exponent);
}

ComplementarityReport check_complementarity(const Instance& inst, int samples, double h,
                                            std::uint64_t seed, double tol) {
  ComplementarityReport rep;
  if (inst.n < 2) {
    rep.pass = true;
    rep.vacuous = true;
    rep.worst_value = 0.0;
    return rep;
  }
  if (!(h > 0.0 && h < 0.5)) throw std::invalid_argument("check_complementarity: bad step h");

  SplitMix64 rng(seed);
  rep.worst_value = std::numeric_limits<double>::infinity();

  // All ordered pairs when cheap, a random subset otherwise.
  const long long all_pairs = static_cast<long long>(inst.n) * (inst.n - 1);
  const int pairs_per_point = static_cast<int>(std::min<long long>(all_pairs, 64));

  Vec x(inst.n);
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < inst.n; ++k) x[k] = rng.uniform(h, 1.0 - h);
    for (int pi = 0; pi < pairs_per_point; ++pi) {
      int i, j;
      if (all_pairs <= 64) {
        i = pi / (inst.n - 1);
        j = pi % (inst.n - 1);
        if (j >= i) ++j;
      } else {
        i = rng.uniform_int(0, inst.n - 1);
        j = rng.uniform_int(0, inst.n - 2);
        if (j >= i) ++j;
      }
      Vec xp = x;
      auto q_at = [&](double xi, double xj) {
        xp[i] = xi;
        xp[j] = xj;
        return quality(inst, i, xp);
      };
      const double est = (q_at(x[i] + h, x[j] + h) - q_at(x[i] + h, x[j] - h) -
                          q_at(x[i] - h, x[j] + h) + q_at(x[i] - h, x[j] - h)) /
                         (4.0 * h * h);
      xp[i] = x[i];
      xp[j] = x[j];
      if (est < rep.worst_value) {
        rep.worst_value = est;
        rep.worst_point = x;
        rep.worst_i = i;
        rep.worst_j = j;
      }
    }
  }
  rep.pass = rep.worst_value >= -tol;
  return rep;
}

}  // namespace ccs
