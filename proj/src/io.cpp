#include "ccs/io.hpp"

#include <fstream>

#include "ccs/model.hpp"

namespace ccs {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& arr, const std::string& field) {
  if (!arr.is_array()) throw ValidationError(field, "expected an array");
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ValidationError(field + "[" + std::to_string(i) + "]",
                                                   "expected a number");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

json mat_to_json(const Mat& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  return arr;
}

Mat mat_from_json(const json& arr, int n, const std::string& field) {
  if (!arr.is_array()) throw ValidationError(field, "expected a row-major array");
  if (static_cast<int>(arr.size()) != n * n)
    throw ValidationError(field, "expected " + std::to_string(n * n) + " entries, got " +
                              std::to_string(arr.size()));
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& cell = arr[static_cast<std::size_t>(i) * n + j];
      if (!cell.is_number()) throw ValidationError(field, "non-numeric entry");
      m(i, j) = cell.get<double>();
    }
  return m;
}

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path, "missing field");
  return *it;
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json j;
  j["n"] = inst.n;
  j["label"] = inst.label;
  if (inst.is_graph()) {
    const auto& gs = inst.graph();
    j["quality"] = {{"kind", "graph"},
                    {"q", vec_to_json(gs.q)},
                    {"g", mat_to_json(gs.g)},
                    {"r", mat_to_json(gs.r)},
                    {"scale", gs.scale},
                    {"allow_negative", gs.allow_negative}};
  } else {
    const auto& sl = std::get<ScalingLaw>(inst.quality);
    j["quality"] = {{"kind", "scaling"}, {"a", sl.a},   {"b", sl.b},
                    {"alpha", sl.alpha}, {"dc", sl.dc}, {"d", sl.d}};
  }
  if (const auto* lin = std::get_if<LinearCost>(&inst.cost)) {
    j["cost"] = {{"kind", "linear"}, {"c", vec_to_json(lin->c)}};
  } else {
    const auto& pw = std::get<PowerCost>(inst.cost);
    j["cost"] = {{"kind", "power"}, {"c", vec_to_json(pw.c)}, {"exponent", pw.exponent}};
  }
  if (inst.relax_quality_cap) j["relax_quality_cap"] = true;
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst;
  if (!j.is_object()) throw ValidationError("", "expected a JSON object");
  const json& jn = require(j, "n", "n");
  if (!jn.is_number_integer()) throw ValidationError("n", "expected an integer");
  inst.n = jn.get<int>();
  inst.label = j.value("label", std::string{});
  inst.relax_quality_cap = j.value("relax_quality_cap", false);

  const json& q = require(j, "quality", "quality");
  const std::string qkind = require(q, "kind", "quality.kind").get<std::string>();
  if (qkind == "graph") {
    GraphSpillover gs;
    gs.q = vec_from_json(require(q, "q", "quality.q"), "quality.q");
    gs.g = mat_from_json(require(q, "g", "quality.g"), inst.n, "quality.g");
    gs.r = mat_from_json(require(q, "r", "quality.r"), inst.n, "quality.r");
    gs.scale = q.value("scale", 1.0);
    gs.allow_negative = q.value("allow_negative", false);
    inst.quality = std::move(gs);
  } else if (qkind == "scaling") {
    ScalingLaw sl;
    sl.a = require(q, "a", "quality.a").get<double>();
    sl.b = require(q, "b", "quality.b").get<double>();
    sl.alpha = q.value("alpha", 0.095);
    sl.dc = require(q, "dc", "quality.dc").get<double>();
    sl.d = require(q, "d", "quality.d").get<double>();
    inst.quality = sl;
  } else {
    throw ValidationError("quality.kind", "unknown kind '" + qkind + "'");
  }

  const json& c = require(j, "cost", "cost");
  const std::string ckind = require(c, "kind", "cost.kind").get<std::string>();
  if (ckind == "linear") {
    inst.cost = LinearCost{vec_from_json(require(c, "c", "cost.c"), "cost.c")};
  } else if (ckind == "power") {
    PowerCost pw;
    pw.c = vec_from_json(require(c, "c", "cost.c"), "cost.c");
    pw.exponent = require(c, "exponent", "cost.exponent").get<double>();
    inst.cost = std::move(pw);
  } else {
    throw ValidationError("cost.kind", "unknown kind '" + ckind + "'");
  }

  validate(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  // nlohmann parse errors carry the byte offset of the failure.
  json j = json::parse(in);
  return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

json mechanism_to_json(const MechanismSpec& mech) {
  json j;
  j["kind"] = mechanism_kind(mech);
  if (const auto* pra = std::get_if<Pra>(&mech)) j["p"] = vec_to_json(pra->p);
  return j;
}

MechanismSpec mechanism_from_json(const json& j) {
  const std::string kind = require(j, "kind", "mechanism.kind").get<std::string>();
  if (kind == "pra") return Pra{vec_from_json(require(j, "p", "mechanism.p"), "mechanism.p")};
  if (kind == "wta") return Wta{};
  if (kind == "tullock") return Tullock{};
  throw ValidationError("mechanism.kind", "unknown kind '" + kind + "'");
}

json solve_outcome_to_json(const SolveOutcome& out, bool with_timings) {
  json j;
  j["algorithm"] = out.algorithm;
  j["p"] = vec_to_json(out.p);
  j["predicted_active"] = out.predicted_active;
  j["predicted_sw"] = out.predicted_sw;
  if (with_timings) j["elapsed_sec"] = out.elapsed_sec;
  return j;
}

json equilibrium_result_to_json(const EquilibriumResult& res) {
  json j;
  j["profile"] = vec_to_json(res.profile);
  j["utilities"] = vec_to_json(res.utilities);
  j["sw"] = res.sw;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["verified"] = res.verified;
  return j;
}

}  // namespace ccs
