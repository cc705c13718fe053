#include <doctest.h>

#include "prnls/error.hpp"
#include "prnls/radial_oracle.hpp"
#include "prnls/solver.hpp"
#include "prnls/symbol.hpp"
#include "support.hpp"

using namespace prnls;

namespace {

// Shooting amplitude for -Delta w + w = w^2 in the plane, frozen from an
// independent adaptive-step (DOP853, rtol 1e-13) bisection in scipy.
constexpr double kPlaneQuadraticU0 = 2.3919564032239298;

PhysParams limit_params(double m = 1.0, double mu = 1.0) {
  PhysParams p;
  p.m = m;
  p.mu = mu;
  p.c = std::numeric_limits<double>::infinity();
  return p;
}

}  // namespace

TEST_CASE("shot classification") {
  const PhysParams p = limit_params();
  CHECK(shoot(0.5, p, 30.0, 1e-3).outcome == ShotOutcome::decays);
  CHECK(shoot(1e-3, p, 30.0, 1e-3).outcome == ShotOutcome::decays);
  CHECK(shoot(10.0, p, 30.0, 1e-3).outcome == ShotOutcome::crosses_zero);
  CHECK(shoot(3.0, p, 30.0, 1e-3).outcome == ShotOutcome::crosses_zero);
  CHECK_THROWS_AS(shoot(0.0, p, 30.0, 1e-3), Error);
  CHECK_THROWS_AS(shoot(1.0, p, 30.0, 0.0), Error);
  CHECK_THROWS_AS(shoot(1.0, p, -1.0, 1e-3), Error);
}

TEST_CASE("oversized step trips the drift monitor") {
  // Just above the rest point the trajectory lingers, so a coarse step has
  // time to pump energy in.
  CHECK_THROWS_AS(shoot(1.2, limit_params(), 30.0, 2.5), Error);
  CHECK_NOTHROW(shoot(1.2, limit_params(), 30.0, 1e-3));
}

TEST_CASE("ground amplitude matches the independent value") {
  const PhysParams p = limit_params();
  const double u0 = find_ground_u0(p, default_bracket(p));
  CHECK(std::abs(u0 - kPlaneQuadraticU0) <= 1e-9);

  // m = 1/2, mu = 1 is the same equation.
  CHECK(std::abs(find_ground_u0(limit_params(0.5, 1.0), default_bracket(p)) - kPlaneQuadraticU0) <= 1e-9);
}

TEST_CASE("ground amplitude is stable under step halving") {
  const PhysParams p = limit_params();
  OracleConfig fine;
  fine.dr = 5e-4;
  const double a = find_ground_u0(p, default_bracket(p));
  const double b = find_ground_u0(p, default_bracket(p), fine);
  CHECK(std::abs(a - b) <= 1e-8);
}

TEST_CASE("invalid brackets are rejected") {
  const PhysParams p = limit_params();
  CHECK_THROWS_AS(find_ground_u0(p, {2.0, 2.0}), Error);
  CHECK_THROWS_AS(find_ground_u0(p, {0.5, 1.0}), Error);
  CHECK_THROWS_AS(find_ground_u0(p, {5.0, 9.0}), Error);
}

TEST_CASE("accepted profile") {
  const RadialProfile prof = ground_profile(limit_params());
  REQUIRE(!prof.values.empty());
  CHECK(prof.values.front() == prof.u0);
  CHECK(prof.values.back() <= 1e-8 * prof.u0);
  for (std::size_t i = 1; i < prof.values.size(); ++i) {
    REQUIRE(prof.values[i] > 0.0);
    REQUIRE(prof.values[i] < prof.values[i - 1]);
  }
  CHECK(prof.value_at(0.0) == prof.u0);
  CHECK(prof.value_at(1e3) == 0.0);
  CHECK(profile_csv(prof).rfind("r,u\n", 0) == 0);
}

TEST_CASE("profile comparison") {
  const RadialProfile prof = ground_profile(limit_params());
  const Grid g = make_grid(2, 32.0, 256);
  CHECK(compare_profiles(RealField(g), prof) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(compare_profiles(lift_profile(prof, g), prof) <= 1e-6);

  const GroundState gs = solve_ground_state(Multiplier::limit(g, limit_params()), SolverConfig{});
  REQUIRE(gs.converged);
  CHECK(compare_profiles(gs, prof) <= 1e-3);
  CHECK(std::abs(gs.field.max() - prof.u0) <= 1e-3 * prof.u0);
}

TEST_CASE("scaling closure across parameter pairs") {
  CHECK(scaling_closure(limit_params(1.0, 1.0), limit_params(0.5, 1.0)) <= 1e-6);
  CHECK(scaling_closure(limit_params(1.0, 1.0), limit_params(2.0, 0.5)) <= 1e-6);
  CHECK(scaling_closure(limit_params(0.7, 1.3), limit_params(1.0, 1.0)) <= 1e-6);
}

TEST_CASE("three-dimensional shooting") {
  PhysParams p = limit_params();
  p.n = 3;
  p.p = 2.5;
  const RadialProfile prof = ground_profile(p);
  CHECK(prof.values.back() <= 1e-8 * prof.u0);
  CHECK(prof.u0 > std::pow(p.mu, 1.0 / (p.p - 2.0)));
}
