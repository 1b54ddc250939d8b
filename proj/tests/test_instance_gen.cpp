#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "ccs/instance_gen.hpp"
#include "ccs/io.hpp"
#include "ccs/model.hpp"
#include "ccs/optimizers.hpp"
#include "ccs/rng.hpp"

using namespace ccs;

namespace {

std::string temp_path(const char* name) {
  return std::string("ccs_test_") + name + ".json";
}

// Exhaustive max-clique by subset scan; independent of the oracle under test.
int clique_number(int n, const std::vector<std::pair<int, int>>& edges) {
  std::set<std::pair<int, int>> e;
  for (auto [a, b] : edges) {
    e.insert({a, b});
    e.insert({b, a});
  }
  int best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) members.push_back(i);
    bool clique = true;
    for (std::size_t a = 0; a < members.size() && clique; ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        if (!e.count({members[a], members[b]})) {
          clique = false;
          break;
        }
    if (clique) best = std::max<int>(best, members.size());
  }
  return best;
}

}  // namespace

TEST_CASE("random graph: seed determinism") {
  const Instance a = random_graph_instance({8, 0.4, 0.9, 2024});
  const Instance b = random_graph_instance({8, 0.4, 0.9, 2024});
  CHECK((a.graph().q - b.graph().q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.graph().g - b.graph().g).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.graph().r - b.graph().r).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.linear_cost().c - b.linear_cost().c).cwiseAbs().maxCoeff() == 0.0);

  const Instance c = random_graph_instance({8, 0.4, 0.9, 2025});
  CHECK((a.graph().q - c.graph().q).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("random graph: scale and validation") {
  const Instance inst = random_graph_instance({30, 0.5, 1.0, 7});
  CHECK(inst.graph().scale == doctest::Approx(1.0 / 30));
  CHECK_NOTHROW(validate(inst));
}

TEST_CASE("random graph: intrinsic quality mean within 3 sigma") {
  // 2000 instances x 50 players = 1e5 draws of q ~ U[0, qstar]
  const double qstar = 0.8;
  double sum = 0.0;
  const int draws = 100000;
  for (int t = 0; t < 2000; ++t) {
    const Instance inst = random_graph_instance({50, 0.0, qstar, 40000 + (std::uint64_t)t});
    sum += inst.graph().q.sum();
  }
  const double mean = sum / draws;
  const double sigma = qstar / std::sqrt(12.0) / std::sqrt(static_cast<double>(draws));
  CHECK(std::abs(mean - qstar / 2.0) <= 3.0 * sigma);
}

TEST_CASE("random graph: edge density within 3 sigma") {
  const double r = 0.3;
  const Instance inst = random_graph_instance({500, r, 1.0, 99});
  const double pairs = 500.0 * 499.0;
  const double density = inst.graph().r.sum() / pairs;
  const double sigma = std::sqrt(r * (1.0 - r) / pairs);
  CHECK(std::abs(density - r) <= 3.0 * sigma);
}

TEST_CASE("random graph: adjacency is directed per ordered pair") {
  const Instance inst = random_graph_instance({60, 0.5, 1.0, 11});
  const auto& r = inst.graph().r;
  bool asymmetric = false;
  for (int i = 0; i < 60 && !asymmetric; ++i)
    for (int j = 0; j < 60; ++j)
      if (r(i, j) != r(j, i)) {
        asymmetric = true;
        break;
      }
  CHECK(asymmetric);
}

TEST_CASE("random tree: structure and determinism") {
  const TreeInstance t1 = random_tree_instance(1, 1.0, 3);
  CHECK(t1.n == 1);
  CHECK(t1.parent[0] == -1);

  const TreeInstance t2 = random_tree_instance(2, 1.0, 3);
  CHECK(t2.parent[1] == 0);

  const TreeInstance t3 = random_tree_instance(40, 1.0, 3);
  for (int i = 1; i < 40; ++i) CHECK(t3.parent[i] < i);
  for (int i = 0; i < 40; ++i) CHECK(t3.q[i] > 0.0);
  CHECK_NOTHROW(validate(t3));

  const TreeInstance t4 = random_tree_instance(40, 1.0, 3);
  CHECK(t3.parent == t4.parent);
  CHECK((t3.q - t4.q).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("clique reduction: oracle optimum is the clique number squared over n") {
  SplitMix64 rng(81);
  for (int t = 0; t < 15; ++t) {
    const int n = rng.uniform_int(3, 9);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.45)) edges.emplace_back(i, j);
    const Instance inst = clique_reduction_instance(n, edges);
    const int omega = clique_number(n, edges);
    const auto out = brute_force_subset_oracle(inst);
    CHECK(out.predicted_sw ==
          doctest::Approx(static_cast<double>(omega) * omega / n).epsilon(1e-9));
  }
}

TEST_CASE("counterexample fixtures match their definitions") {
  const auto [wta_inst, wta_mech] = counterexample_wta();
  CHECK(mechanism_kind(wta_mech) == "wta");
  Vec x(2);
  x << 1.0, 0.4;
  CHECK(quality(wta_inst, 0, x) == doctest::Approx(1.0));
  CHECK(quality(wta_inst, 1, x) == doctest::Approx(0.8));
  const Vec shares = allocate(wta_mech, qualities(wta_inst, x), false);
  CHECK(shares[0] == 1.0);  // player 1 wins at (1, 0.4)
  CHECK(shares[1] == 0.0);

  const auto [tl_inst, tl_mech] = counterexample_tullock();
  CHECK(mechanism_kind(tl_mech) == "tullock");
  const Vec ones = Vec::Ones(2);
  CHECK(quality(tl_inst, 0, ones) == doctest::Approx(0.5));
  CHECK(quality(tl_inst, 1, ones) == doctest::Approx(1.0));
}

TEST_CASE("instance json round-trip is exact") {
  const Instance inst = random_graph_instance({12, 0.5, 1.0, 55});
  const std::string path = temp_path("roundtrip");
  save_instance(inst, path);
  const Instance back = load_instance(path);
  CHECK(back.n == inst.n);
  CHECK(back.label == inst.label);
  CHECK((back.graph().q - inst.graph().q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.graph().g - inst.graph().g).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.graph().r - inst.graph().r).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.graph().scale == inst.graph().scale);
  CHECK((back.linear_cost().c - inst.linear_cost().c).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());

  Instance sl;
  sl.n = 2;
  sl.quality = ScalingLaw{0.21, 0.49, 0.095, 1.7, 1.3};
  sl.cost = PowerCost{Vec::Constant(2, 0.33), 2.5};
  sl.label = "scaling fixture";
  const std::string path2 = temp_path("roundtrip2");
  save_instance(sl, path2);
  const Instance back2 = load_instance(path2);
  const auto& s = std::get<ScalingLaw>(back2.quality);
  CHECK(s.a == 0.21);
  CHECK(s.b == 0.49);
  CHECK(s.dc == 1.7);
  CHECK(s.d == 1.3);
  CHECK(std::get<PowerCost>(back2.cost).exponent == 2.5);
  std::remove(path2.c_str());
}

TEST_CASE("load errors are specific") {
  const std::string path = temp_path("bad");

  {
    std::ofstream f(path);
    f << "{ \"n\": 2, ";  // truncated document
  }
  CHECK_THROWS_WITH_AS(load_instance(path), doctest::Contains("parse error"),
                       nlohmann::json::parse_error);

  {
    std::ofstream f(path);
    // q has 3 entries for n = 2
    f << R"({"n": 2, "label": "",
            "quality": {"kind": "graph", "q": [1, 1, 1], "g": [0,0,0,0], "r": [0,0,0,0]},
            "cost": {"kind": "linear", "c": [0, 0]}})";
  }
  CHECK_THROWS_WITH_AS(load_instance(path), doctest::Contains("quality.q"), ValidationError);

  {
    std::ofstream f(path);
    f << R"({"n": 2, "quality": {"kind": "mystery"}, "cost": {"kind": "linear", "c": [0, 0]}})";
  }
  CHECK_THROWS_AS(load_instance(path), ValidationError);

  std::remove(path.c_str());
}

TEST_CASE("mechanism specs serialize inside configs") {
  Vec p(2);
  p << 0.25, 0.5;
  const auto j = mechanism_to_json(Pra{p});
  CHECK(j["kind"] == "pra");
  const MechanismSpec back = mechanism_from_json(j);
  CHECK(std::get<Pra>(back).p[1] == 0.5);
  CHECK(mechanism_kind(mechanism_from_json(mechanism_to_json(Wta{}))) == "wta");
  CHECK(mechanism_kind(mechanism_from_json(mechanism_to_json(Tullock{}))) == "tullock");
}
