#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "ccs/model.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Provisional allocation: M_i(Q) = p_i * Q_i with sum_i p_i <= 1.
struct Pra {
  Vec p;
};

// Winner-takes-all: uniform split among the argmax set.
struct Wta {};

// Proportional shares Q_i / sum_j Q_j, uniform when all qualities are zero.
struct Tullock {};

using MechanismSpec = std::variant<Pra, Wta, Tullock>;

inline std::string mechanism_kind(const MechanismSpec& m) {
  if (std::holds_alternative<Pra>(m)) return "pra";
  if (std::holds_alternative<Wta>(m)) return "wta";
  return "tullock";
}

// Maps a quality vector to attention shares. Shares lie in [0, 1] and sum to
// at most 1. When validate_range is set, quality entries outside [0, 1]
// (beyond 1e-12 slack) raise std::invalid_argument; fixtures with a relaxed
// quality cap disable the check.
Vec allocate(const MechanismSpec& mech, const Vec& q, bool validate_range = true);

// U_i(x) = M_i(Q(x)) - c_i(x_i).
double utility(const Instance& inst, const MechanismSpec& mech, int i, const Vec& x);

struct AxiomReport {
  bool applicable = true;
  std::string note;
  bool monotonicity_pass = false;
  double worst_monotonicity = 0.0;
  int worst_i = -1;
  int worst_k = -1;
  bool separability_pass = false;
  Vec separability_b;
};

// Diagnostic probe of the mechanism axioms: share monotonicity in every
// quality coordinate (finite differences on random quality vectors) and, for
// PRA, the separable form M_i(all-ones) = p_i with sum p_i <= 1. WTA is
// reported as not applicable.
AxiomReport check_axioms(const MechanismSpec& mech, int n, int samples,
                         std::uint64_t seed, double tol = 1e-8);

}  // namespace ccs
