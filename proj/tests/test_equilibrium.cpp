#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ccs/equilibrium.hpp"
#include "ccs/instance_gen.hpp"
#include "ccs/model.hpp"
#include "ccs/optimizers.hpp"
#include "ccs/rng.hpp"

using namespace ccs;

namespace {

Instance single(double q, double c) {
  GraphSpillover gs;
  gs.q = Vec::Constant(1, q);
  gs.g = Mat::Zero(1, 1);
  gs.r = Mat::Zero(1, 1);
  Instance inst;
  inst.n = 1;
  inst.quality = gs;
  inst.cost = LinearCost{Vec::Constant(1, c)};
  return inst;
}

Vec random_allocation(int n, SplitMix64& rng) {
  Vec u(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    u[i] = rng.uniform01();
    total += u[i];
  }
  return u * (rng.uniform01() / std::max(total, 1e-9));
}

}  // namespace

TEST_CASE("best response: linear closed form with tie-break high") {
  const Instance inst = single(0.5, 0.4);
  CHECK(best_response(inst, Pra{Vec::Constant(1, 0.9)}, 0, Vec::Ones(1)) == 1.0);
  CHECK(best_response(inst, Pra{Vec::Constant(1, 0.6)}, 0, Vec::Ones(1)) == 0.0);
  // exact indifference: 0.8 * 0.5 == 0.4
  CHECK(best_response(inst, Pra{Vec::Constant(1, 0.8)}, 0, Vec::Ones(1)) == 1.0);
}

TEST_CASE("best response: grid path for convex costs") {
  Instance inst = single(0.8, 0.0);
  inst.cost = PowerCost{Vec::Constant(1, 0.8), 2.0};
  // maximize 0.8 z - 0.8 z^2 on the grid
  const double z = best_response(inst, Pra{Vec::Constant(1, 1.0)}, 0, Vec::Zero(1));
  CHECK(z == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("greatest equilibrium: zero shares collapse in one working sweep") {
  const Instance inst = random_graph_instance({4, 0.5, 1.0, 9});
  const auto res = greatest_equilibrium(inst, Vec::Zero(4));
  CHECK(res.converged);
  CHECK(res.profile.isZero());
  CHECK(res.sw == 0.0);
  CHECK(res.iterations == 1);
}

TEST_CASE("greatest equilibrium: K2 clique reduction activates both") {
  const Instance k2 = clique_reduction_instance(2, {{0, 1}});
  const auto res = greatest_equilibrium(k2, Vec::Constant(2, 0.5));
  CHECK(res.converged);
  CHECK(res.profile[0] == 1.0);
  CHECK(res.profile[1] == 1.0);
  CHECK(res.sw == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.verified);
}

TEST_CASE("greatest equilibrium: tullock fixture is stable under pra") {
  const auto [inst, _] = counterexample_tullock();
  const auto res = greatest_equilibrium(inst, Vec::Constant(2, 0.5));
  CHECK(res.converged);
  CHECK(res.profile[0] == 1.0);  // indifferent, tie-break high
  CHECK(res.profile[1] == 1.0);  // coefficient 0.25 > 0
}

TEST_CASE("greatest equilibrium: non-convergence reported when capped") {
  // Player 0 lives off player 1's spillover; the cascade needs two sweeps.
  GraphSpillover gs;
  gs.q = Vec(2);
  gs.q << 0.0, 0.4;
  gs.g = Mat::Zero(2, 2);
  gs.r = Mat::Zero(2, 2);
  gs.g(0, 1) = 0.5;
  gs.r(0, 1) = 1.0;
  Instance inst;
  inst.n = 2;
  inst.quality = gs;
  Vec c(2);
  c << 0.15, 0.3;
  inst.cost = LinearCost{c};

  Vec p(2);
  p << 0.4, 0.6;
  SolverConfig capped;
  capped.max_iter = 2;
  const auto res = greatest_equilibrium(inst, p, capped);
  CHECK(!res.converged);

  const auto full = greatest_equilibrium(inst, p);
  CHECK(full.converged);
  CHECK(full.iterations == 2);
  CHECK(full.profile.isZero());
}

TEST_CASE("solvers refuse instances that allow negative weights") {
  Instance inst = random_graph_instance({3, 0.5, 1.0, 404});
  auto gs = inst.graph();
  gs.allow_negative = true;
  inst.quality = gs;
  CHECK_THROWS_AS(greatest_equilibrium(inst, Vec::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(gcs(inst), std::invalid_argument);
  CHECK_THROWS_AS(nsr_solve(inst, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_subset_oracle(inst), std::invalid_argument);
}

TEST_CASE("verify_pne: trivial and fixture cases") {
  const Instance inst = random_graph_instance({3, 0.5, 1.0, 31});
  CHECK(verify_pne(inst, Pra{Vec::Zero(3)}, Vec::Zero(3)));

  const auto [tullock_inst, mech] = counterexample_tullock();
  CHECK(!verify_pne(tullock_inst, mech, Vec::Ones(2)));
}

TEST_CASE("solver output passes verify_pne on random instances") {
  SplitMix64 rng(23);
  for (int t = 0; t < 25; ++t) {
    const int n = rng.uniform_int(2, 8);
    const Instance inst =
        random_graph_instance({n, rng.uniform01(), 1.0, 4000 + (std::uint64_t)t});
    const Vec p = random_allocation(n, rng);
    const auto res = greatest_equilibrium(inst, p);
    CHECK(res.converged);
    CHECK(res.verified);
  }
}

TEST_CASE("monotone non-increasing sweeps and dominance over the zero start") {
  SplitMix64 rng(29);
  for (int t = 0; t < 25; ++t) {
    const int n = rng.uniform_int(2, 10);
    const Instance inst =
        random_graph_instance({n, rng.uniform01(), 1.0, 5000 + (std::uint64_t)t});
    const Vec p = random_allocation(n, rng);
    SolverConfig cfg;
    cfg.keep_trace = true;
    const auto top = greatest_equilibrium(inst, p, cfg);
    REQUIRE(top.converged);
    for (std::size_t s = 1; s < top.trace.size(); ++s)
      for (int i = 0; i < n; ++i) CHECK(top.trace[s][i] <= top.trace[s - 1][i] + 1e-12);

    const auto bottom = best_response_dynamics(inst, p, Vec::Zero(n), cfg);
    REQUIRE(bottom.converged);
    for (int i = 0; i < n; ++i) CHECK(bottom.profile[i] <= top.profile[i] + 1e-9);
    CHECK(bottom.sw <= top.sw + 1e-9);
    for (int i = 0; i < n; ++i) CHECK(bottom.utilities[i] <= top.utilities[i] + 1e-9);
  }
}

TEST_CASE("linear instances admit only binary best responses") {
  SplitMix64 rng(37);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.uniform_int(2, 6);
    const Instance inst =
        random_graph_instance({n, rng.uniform01(), 1.0, 6000 + (std::uint64_t)t});
    const Vec p = random_allocation(n, rng);
    Vec others(n);
    for (int i = 0; i < n; ++i) others[i] = rng.uniform01();
    const int i = rng.uniform_int(0, n - 1);
    const double br = best_response(inst, Pra{p}, i, others);
    CHECK((br == 0.0 || br == 1.0));
  }
}

TEST_CASE("pra utilities have nonnegative cross-partials") {
  SplitMix64 rng(41);
  for (int t = 0; t < 10; ++t) {
    const Instance inst = random_graph_instance({4, 0.8, 1.0, 7000 + (std::uint64_t)t});
    const Vec p = random_allocation(4, rng);
    const MechanismSpec mech = Pra{p};
    const double h = 1e-3;
    for (int s = 0; s < 20; ++s) {
      Vec x(4);
      for (int k = 0; k < 4; ++k) x[k] = rng.uniform(h, 1.0 - h);
      const int i = rng.uniform_int(0, 3);
      int j = rng.uniform_int(0, 2);
      if (j >= i) ++j;
      Vec xt = x;
      auto u_at = [&](double xi, double xj) {
        xt[i] = xi;
        xt[j] = xj;
        return utility(inst, mech, i, xt);
      };
      const double est = (u_at(x[i] + h, x[j] + h) - u_at(x[i] + h, x[j] - h) -
                          u_at(x[i] - h, x[j] + h) + u_at(x[i] - h, x[j] - h)) /
                         (4.0 * h * h);
      CHECK(est >= -1e-8);
    }
  }
}

TEST_CASE("find_pne_grid: counterexample fixtures have no grid equilibrium") {
  const auto [wta_inst, wta_mech] = counterexample_wta();
  CHECK(find_pne_grid(wta_inst, wta_mech, 0.05).empty());

  const auto [tl_inst, tl_mech] = counterexample_tullock();
  CHECK(find_pne_grid(tl_inst, tl_mech, 0.05).empty());
}

TEST_CASE("find_pne_grid: pra on the tullock fixture, against a hand oracle") {
  const auto [inst, _] = counterexample_tullock();
  const MechanismSpec pra = Pra{Vec::Constant(2, 0.5)};
  const auto pne = find_pne_grid(inst, pra, 0.5);

  // Independent oracle: enumerate the 3x3 grid and test deviations directly.
  std::vector<Vec> expected;
  const double grid[3] = {0.0, 0.5, 1.0};
  for (double a : grid)
    for (double b : grid) {
      Vec x(2);
      x << a, b;
      bool pne_here = true;
      for (int i = 0; i < 2 && pne_here; ++i) {
        const double base = utility(inst, pra, i, x);
        for (double z : grid) {
          Vec d = x;
          d[i] = z;
          if (utility(inst, pra, i, d) > base + 1e-9) {
            pne_here = false;
            break;
          }
        }
      }
      if (pne_here) expected.push_back(x);
    }

  REQUIRE(pne.size() == expected.size());
  bool has_ones = false;
  for (const auto& x : pne) has_ones |= (x[0] == 1.0 && x[1] == 1.0);
  CHECK(has_ones);
}

TEST_CASE("find_pne_grid: worker counts agree and the guard trips") {
  const auto [inst, mech] = counterexample_tullock();
  const auto serial = find_pne_grid(inst, mech, 0.2, {}, 1);
  const auto parallel = find_pne_grid(inst, mech, 0.2, {}, 8);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK((serial[i] - parallel[i]).cwiseAbs().maxCoeff() == 0.0);

  const Instance big = random_graph_instance({10, 0.5, 1.0, 77});
  CHECK_THROWS_AS(find_pne_grid(big, MechanismSpec{Tullock{}}, 0.01), std::domain_error);
}

TEST_CASE("continuous tullock best response matches the closed form") {
  const auto [inst, _] = counterexample_tullock();
  const double expected = (std::sqrt(8.0) - 1.0) / 2.0;
  CHECK(continuous_best_response_tullock2(inst, 0.5) == doctest::Approx(expected).epsilon(1e-4));
  CHECK(continuous_best_response_tullock2(inst, 1.0) == doctest::Approx(expected).epsilon(1e-4));
  CHECK_THROWS_AS(continuous_best_response_tullock2(inst, 0.0), std::invalid_argument);

  // 1-D grid oracle at 1e-4 resolution agrees.
  const MechanismSpec tullock = Tullock{};
  double best_v = -1e18, best_z = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    Vec x(2);
    x << 1.0, k / 10000.0;
    const double v = utility(inst, tullock, 1, x);
    if (v > best_v) {
      best_v = v;
      best_z = k / 10000.0;
    }
  }
  CHECK(continuous_best_response_tullock2(inst, 1.0) == doctest::Approx(best_z).epsilon(1e-3));

  // zero-benefit variant: no spillover edge, pure cost
  auto zero = inst;
  auto gs = zero.graph();
  gs.g(1, 0) = 0.0;
  zero.quality = gs;
  CHECK(continuous_best_response_tullock2(zero, 0.5) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("scaling-law games solve on the effort grid") {
  Instance inst;
  inst.n = 3;
  inst.quality = ScalingLaw{0.3, 0.4, 0.095, 1.0, 1.0};
  Vec c(3);
  c << 0.05, 0.2, 0.5;
  inst.cost = LinearCost{c};
  validate(inst);

  Vec p(3);
  p << 0.5, 0.3, 0.2;
  SolverConfig cfg;
  cfg.keep_trace = true;
  const auto res = greatest_equilibrium(inst, p, cfg);
  CHECK(res.converged);
  CHECK(res.verified);
  for (std::size_t s = 1; s < res.trace.size(); ++s)
    for (int i = 0; i < 3; ++i) CHECK(res.trace[s][i] <= res.trace[s - 1][i] + 1e-12);
  // efforts live on the solver grid
  for (int i = 0; i < 3; ++i) {
    const double k = res.profile[i] / cfg.effort_grid_step;
    CHECK(std::abs(k - std::round(k)) <= 1e-9);
  }
  CHECK(res.sw == social_welfare(inst, res.profile));
}

TEST_CASE("power-cost games reach interior equilibria") {
  GraphSpillover gs;
  gs.q = Vec::Constant(2, 0.5);
  gs.g = Mat::Zero(2, 2);
  gs.r = Mat::Zero(2, 2);
  gs.g(0, 1) = gs.g(1, 0) = 0.3;
  gs.r(0, 1) = gs.r(1, 0) = 1.0;
  Instance inst;
  inst.n = 2;
  inst.quality = gs;
  inst.cost = PowerCost{Vec::Constant(2, 0.6), 2.0};
  inst.relax_quality_cap = true;

  const auto res = greatest_equilibrium(inst, Vec::Constant(2, 0.5));
  CHECK(res.converged);
  CHECK(res.verified);
  CHECK(res.profile[0] > 0.0);
  CHECK(res.profile[0] < 1.0);
  // symmetric instance, symmetric greatest equilibrium
  CHECK(res.profile[0] == doctest::Approx(res.profile[1]).epsilon(1e-9));
}
