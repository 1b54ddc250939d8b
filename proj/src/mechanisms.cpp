#include "ccs/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ccs/rng.hpp"

namespace ccs {

namespace {
constexpr double kTieBand = 1e-12;  // quality ties for the argmax split
}

Vec allocate(const MechanismSpec& mech, const Vec& q, bool validate_range) {
  const int n = static_cast<int>(q.size());
  if (n == 0) throw std::invalid_argument("allocate: empty quality vector");
  if (validate_range) {
    for (int i = 0; i < n; ++i)
      if (q[i] < -kTieBand || q[i] > 1.0 + kTieBand)
        throw std::invalid_argument("allocate: quality entry outside [0, 1]");
  }

  if (const auto* pra = std::get_if<Pra>(&mech)) {
    validate_allocation(pra->p, n);
    return pra->p.cwiseProduct(q);
  }

  if (std::holds_alternative<Wta>(mech)) {
    const double top = q.maxCoeff();
    int winners = 0;
    for (int i = 0; i < n; ++i) winners += (q[i] >= top - kTieBand);
    Vec shares = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
      if (q[i] >= top - kTieBand) shares[i] = 1.0 / winners;
    return shares;
  }

  const double total = q.sum();
  if (total <= 0.0) return Vec::Constant(n, 1.0 / n);  // uniform fallback
  return q / total;
}

double utility(const Instance& inst, const MechanismSpec& mech, int i, const Vec& x) {
  const Vec q = qualities(inst, x);
  const Vec shares = allocate(mech, q, !inst.relax_quality_cap);
  return shares[i] - cost_of(inst, i, x[i]);
}

AxiomReport check_axioms(const MechanismSpec& mech, int n, int samples, std::uint64_t seed,
                         double tol) {
  AxiomReport rep;
  if (std::holds_alternative<Wta>(mech)) {
    rep.applicable = false;
    rep.note = "not-applicable: non-differentiable";
    return rep;
  }
  if (n < 1) throw std::invalid_argument("check_axioms: n must be positive");
  if (const auto* pra = std::get_if<Pra>(&mech))
    if (static_cast<int>(pra->p.size()) != n)
      throw std::invalid_argument("check_axioms: p length != n");

  SplitMix64 rng(seed);
  const double h = 1e-4;
  double worst = std::numeric_limits<double>::infinity();
  Vec q(n);
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < n; ++k) q[k] = rng.uniform(h, 1.0 - h);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        Vec hi = q, lo = q;
        hi[k] += h;
        lo[k] -= h;
        const double d = (allocate(mech, hi)[i] - allocate(mech, lo)[i]) / (2.0 * h);
        if (d < worst) {
          worst = d;
          rep.worst_i = i;
          rep.worst_k = k;
        }
      }
    }
  }
  rep.worst_monotonicity = worst;
  rep.monotonicity_pass = worst >= -tol;

  // Separable form M_i = b_i * f_i with b_i = M_i(all-ones) and f_i in
  // [0, 1]: equivalently no share may exceed its all-ones value, and the
  // b_i must fit in the budget.
  const Vec at_ones = allocate(mech, Vec::Ones(n));
  rep.separability_b = at_ones;
  if (const auto* pra = std::get_if<Pra>(&mech)) {
    rep.separability_pass =
        (at_ones - pra->p).cwiseAbs().maxCoeff() <= kTieBand && at_ones.sum() <= 1.0 + kTieBand;
  } else {
    rep.separability_pass = at_ones.sum() <= 1.0 + kTieBand;
    SplitMix64 sep_rng(seed ^ 0x5eb0ULL);
    Vec q2(n);
    for (int s = 0; s < samples && rep.separability_pass; ++s) {
      for (int k = 0; k < n; ++k) q2[k] = sep_rng.uniform01();
      const Vec shares = allocate(mech, q2);
      for (int i = 0; i < n; ++i)
        if (shares[i] > at_ones[i] + kTieBand) {
          rep.separability_pass = false;
          break;
        }
    }
  }
  return rep;
}

}  // namespace ccs
