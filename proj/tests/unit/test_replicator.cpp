#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "swarmrl/env.hpp"
#include "swarmrl/errors.hpp"
#include "swarmrl/policy.hpp"
#include "swarmrl/replicator.hpp"
#include "swarmrl/rng.hpp"

using namespace swarmrl;

namespace {

void check_close(const Simplex& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

}  // namespace

TEST_CASE("Euler step reference values") {
  const std::vector<double> q{0.8, 0.4};
  const auto half = Simplex::uniform(2);
  check_close(trd_step(half, q, 0.1), {0.51, 0.49}, 1e-15);
  check_close(mrd_step(half, q, 0.1), {0.5 + 0.1 / 6, 0.5 - 0.1 / 6}, 1e-12);
  CHECK(mrd_step(half, q, 0.1)[0] == doctest::Approx(0.51667).epsilon(1e-5));
}

TEST_CASE("fixed points") {
  RngStream rng(1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.index(6);
    const auto pi = Simplex::random(n, rng);
    const std::vector<double> flat(n, 0.1 + 0.8 * rng.uniform());
    CHECK(trd_step(pi, flat, 0.5) == pi);
    CHECK(mrd_step(pi, flat, 0.5) == pi);
    std::vector<double> q(n);
    for (double& x : q) x = 0.05 + 0.9 * rng.uniform();
    const auto pure = Simplex::pure(n, rng.index(n));
    CHECK(trd_step(pure, q, 1.0) == pure);
    CHECK(mrd_step(pure, q, 1.0) == pure);
  }
}

TEST_CASE("errors") {
  const auto half = Simplex::uniform(2);
  CHECK_THROWS_AS(mrd_step(half, std::vector<double>{0.0, 0.0}, 0.1), NumericError);
  CHECK_THROWS_AS(trd_step(half, std::vector<double>{0.8, 0.4}, 6.0), StepSizeError);
  // v = 0.02: the normalized field pushes the second entry far below zero.
  CHECK_THROWS_AS(mrd_step(Simplex({0.02, 0.98}), std::vector<double>{1.0, 0.0}, 2.0), StepSizeError);
  CHECK_THROWS_AS(step_count(1.0, 0.0), ConfigError);
}

TEST_CASE("step count and recording") {
  CHECK(step_count(100.0, 0.001) == 100000);
  CHECK(step_count(1000.0, 0.001) == 1000000);
  CHECK(step_count(1.0, 0.3) == 4);
  CHECK(step_count(0.1, 0.1) == 1);

  const std::vector<double> q{0.8, 0.4};
  const auto two = integrate({OdeKind::TRD, 0.1, 0.1, 1}, Simplex::uniform(2), q);
  CHECK(two.points.size() == 2);
  CHECK(two.points.back().time == doctest::Approx(0.1));

  const auto strided = integrate({OdeKind::MRD, 0.01, 1.0, 7}, Simplex::uniform(2), q);
  CHECK(strided.points.front().step == 0);
  CHECK(strided.points.back().step == 100);
  for (std::size_t i = 1; i < strided.points.size(); ++i) {
    CHECK(strided.points[i].step > strided.points[i - 1].step);
  }
  CHECK(strided.points.size() == 100 / 7 + 2);
}

TEST_CASE("speed relation on random states") {
  RngStream rng(2);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng.index(9);
    const auto pi = Simplex::random(n, rng);
    std::vector<double> q(n);
    for (double& x : q) x = rng.uniform();
    const double delta = 0.001 + 0.1 * rng.uniform();
    const double v = policy_value(pi, q);
    const auto trd = displacement(pi, trd_step(pi, q, delta));
    const auto mrd = displacement(pi, mrd_step(pi, q, delta));
    const auto field = oracle::taylor_field(pi.vector(), q);
    for (std::size_t a = 0; a < n; ++a) {
      CHECK(std::abs(mrd[a] - trd[a] / v) <= 1e-12);
      CHECK(std::abs(trd[a] - delta * field[a]) <= 1e-12);
    }
  }
}

TEST_CASE("permutation equivariance") {
  RngStream rng(3);
  const std::size_t n = 6;
  const auto pi = Simplex::random(n, rng);
  std::vector<double> q(n);
  for (double& x : q) x = rng.uniform();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = (i * 5 + 2) % n;
  std::vector<double> pi_p(n), q_p(n);
  for (std::size_t i = 0; i < n; ++i) {
    pi_p[perm[i]] = pi[i];
    q_p[perm[i]] = q[i];
  }
  for (auto kind : {OdeKind::TRD, OdeKind::MRD}) {
    const auto a = integrate({kind, 0.05, 20.0, 10}, pi, q);
    const auto b = integrate({kind, 0.05, 20.0, 10}, Simplex(pi_p), q_p);
    REQUIRE(a.points.size() == b.points.size());
    CHECK(b.optimal_arm == perm[a.optimal_arm]);
    for (std::size_t t = 0; t < a.points.size(); ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(a.points[t].state[i] == b.points[t].state[perm[i]]);
      }
      CHECK(a.points[t].mass_optimal == b.points[t].mass_optimal);
    }
  }
}

TEST_CASE("value never decreases along small-step TRD trajectories") {
  RngStream rng(4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.index(9);
    std::vector<double> q(n);
    for (double& x : q) x = rng.uniform();
    auto pi = Simplex::random(n, rng);
    double v = policy_value(pi, q);
    for (int s = 0; s < 2000; ++s) {
      pi = trd_step(pi, q, 0.01);
      const double next = policy_value(pi, q);
      REQUIRE(next >= v - 1e-12);
      v = next;
    }
  }
}

TEST_CASE("simplex preserved for moderate steps") {
  RngStream rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.index(9);
    std::vector<double> q(n);
    for (double& x : q) x = 0.01 + 0.99 * rng.uniform();
    auto pi = Simplex::random(n, rng);
    for (int s = 0; s < 100; ++s) {
      pi = (s % 2 ? trd_step(pi, q, 0.1) : mrd_step(pi, q, 0.1));
      REQUIRE(std::abs(pi.sum() - 1.0) <= 1e-9);
      for (double x : pi.probs()) REQUIRE(x >= 0.0);
    }
  }
}

TEST_CASE("long-horizon convergence in the spread environment") {
  const auto env = make_env(EnvFamily::Spread, 10, 1.0, 1);
  const auto q = estimate_q(env, 1'000'000);
  const std::size_t best = env.optimal_arm();
  RngStream rng(6);
  for (int t = 0; t < 5; ++t) {
    const auto pi0 = Simplex::random(10, rng);
    for (auto kind : {OdeKind::TRD, OdeKind::MRD}) {
      const auto traj = integrate({kind, 0.01, 100.0, 1000}, pi0, q.q);
      CHECK(traj.optimal_arm == best);
      CHECK(traj.points.back().mass_optimal > 0.99);
      CHECK(traj.points.back().argmax_optimal);
    }
  }
}

TEST_CASE("MRD outpaces TRD when every arm pays little") {
  const auto env = make_env(EnvFamily::NearZero, 10, 1.0, 1);
  const auto q = estimate_q(env, 1'000'000);
  const std::size_t best = env.optimal_arm();
  RngStream rng(7);
  auto steps_to = [&](OdeKind kind, Simplex pi) {
    for (std::uint64_t s = 0; s < 1'000'000; ++s) {
      if (pi[best] >= 0.95) return s;
      pi = kind == OdeKind::TRD ? trd_step(pi, q.q, 1.0) : mrd_step(pi, q.q, 1.0);
    }
    return std::uint64_t{1'000'000};
  };
  for (int t = 0; t < 3; ++t) {
    const auto pi0 = Simplex::random(10, rng);
    CHECK(steps_to(OdeKind::MRD, pi0) < steps_to(OdeKind::TRD, pi0));
  }
}
