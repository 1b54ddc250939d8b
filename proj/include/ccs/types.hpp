#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace ccs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Validation failure that names the offending field, e.g. "quality.g".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Quality model: Q_i(x) = scale * x_i * (q_i + sum_{j != i} g_ij r_ij x_j).
// g(i, j) is the spillover weight from player j into player i; r holds the
// adjacency bits with the same indexing. Diagonals of g and r are ignored.
struct GraphSpillover {
  Vec q;
  Mat g;
  Mat r;
  double scale = 1.0;
  bool allow_negative = false;  // test-only; solvers reject such instances
};

// Quality model: Q_i(x) = x_i * (a + b * (1 - (dc / (sum_j x_j + d))^alpha)).
struct ScalingLaw {
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.095;
  double dc = 1.0;
  double d = 1.0;  // must exceed alpha
};

using QualityModel = std::variant<GraphSpillover, ScalingLaw>;

struct LinearCost {
  Vec c;  // c_i(x) = c_i * x, each c_i in [0, 1]
};

struct PowerCost {
  Vec c;  // c_i(x) = c_i * x^exponent
  double exponent = 2.0;
};

using CostModel = std::variant<LinearCost, PowerCost>;

struct Instance {
  int n = 0;
  QualityModel quality;
  CostModel cost;
  std::string label;
  // Fixture-only escape hatch: skip the Q <= 1 spot check. Stored instances
  // carry the flag so reloading a fixture keeps it loadable.
  bool relax_quality_cap = false;

  bool is_graph() const { return std::holds_alternative<GraphSpillover>(quality); }
  const GraphSpillover& graph() const { return std::get<GraphSpillover>(quality); }
  bool has_linear_cost() const { return std::holds_alternative<LinearCost>(cost); }
  const LinearCost& linear_cost() const { return std::get<LinearCost>(cost); }
};

// Throws ValidationError naming the first violated field.
void validate(const Instance& inst);

// Effective spillover weights g .* r with a zeroed diagonal.
Mat effective_weights(const GraphSpillover& gs);

// Number of entries exactly equal to 1 (the "active" players).
inline int active_count(const Vec& x) {
  int k = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) k += (x[i] == 1.0);
  return k;
}

inline void validate_profile(const Vec& x, int n) {
  if (static_cast<int>(x.size()) != n)
    throw ValidationError("profile", "length != n");
  for (int i = 0; i < n; ++i)
    if (!(x[i] >= -1e-12 && x[i] <= 1.0 + 1e-12))
      throw ValidationError("profile[" + std::to_string(i) + "]", "outside [0, 1]");
}

inline void validate_allocation(const Vec& p, int n) {
  if (static_cast<int>(p.size()) != n)
    throw ValidationError("p", "length != n");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(p[i] >= -1e-12 && p[i] <= 1.0 + 1e-12))
      throw ValidationError("p[" + std::to_string(i) + "]", "outside [0, 1]");
    sum += p[i];
  }
  if (sum > 1.0 + 1e-12) throw ValidationError("p", "entries sum above 1");
}

}  // namespace ccs
