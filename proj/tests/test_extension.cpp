#include <doctest.h>

#include "prnls/error.hpp"
#include "prnls/extension.hpp"
#include "prnls/solver.hpp"
#include "prnls/symbol.hpp"
#include "support.hpp"

using namespace prnls;

namespace {

PhysParams unit(double c = 1.0) {
  PhysParams p;
  p.c = c;
  return p;
}

}  // namespace

TEST_CASE("zero mode") {
  for (double c : {1.0, 3.0, 1e4}) {
    const PhysParams p = unit(c);
    const ModeExtension e = make_mode(0.0, {0.6, -0.8}, p);
    CHECK(e.decay == doctest::Approx(c));
    CHECK(mode_energy(e, p) == doctest::Approx(c * c).epsilon(1e-14));
    CHECK(trace_energy(e, p) == doctest::Approx(c * c).epsilon(1e-14));
  }
}

TEST_CASE("hand-evaluated mode energies") {
  const PhysParams p = unit();
  const ModeExtension e = make_mode(3.0, 1.0, p);
  CHECK(e.decay == 2.0);
  CHECK(mode_energy(e, p) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(trace_energy(e, p) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(perturbed_mode_energy(e, 1.0, p) == doctest::Approx(13.0 / 6.0).epsilon(1e-15));
  CHECK(perturbed_mode_energy(e, 0.0, p) == doctest::Approx(mode_energy(e, p)).epsilon(1e-15));
  CHECK(perturbed_excess(e, 1.0, p) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(perturbed_mode_energy(e, 1e8, p) > 1e7);
  CHECK_THROWS_AS(perturbed_mode_energy(e, -2.0, p), Error);
  CHECK_THROWS_AS(perturbed_mode_energy(e, -5.0, p), Error);
  CHECK_NOTHROW(perturbed_mode_energy(e, -1.0, p));
}

TEST_CASE("equality and strict inequality on a lattice") {
  const Grid g = make_grid(2, 32.0, 64);
  const auto xi_sq = g.xi_sq_table();
  for (double c : {1.0, 10.0, 1e8}) {
    const PhysParams p = unit(c);
    for (std::size_t k = 0; k < xi_sq.size(); ++k) {
      const ModeExtension e = make_mode(xi_sq[k], {1.0, 0.5}, p);
      const double lhs = trace_energy(e, p), rhs = mode_energy(e, p);
      REQUIRE(std::abs(lhs - rhs) <= 1e-12 * rhs);
      for (double d = 1e-6; d <= 1e3; d *= 10.0) {
        REQUIRE(perturbed_excess(e, d, p) > 0.0);
        // The raw closed form only resolves the excess above rounding.
        REQUIRE(perturbed_mode_energy(e, d, p) >= rhs * (1.0 - 4e-16));
      }
    }
  }
}

TEST_CASE("Neumann consistency") {
  const Grid g = make_grid(2, 16.0, 64);
  CHECK(neumann_consistency(test::random_field(g, 1), unit()) <= 1e-14);
  CHECK(neumann_consistency(test::random_field(g, 2), unit(7.0)) <= 1e-14);
  CHECK(neumann_consistency(RealField(g), unit()) == 0.0);
  CHECK(neumann_consistency(test::random_field(g, 3), unit(1e8)) <= 1e-12);
}

TEST_CASE("full check on ground states") {
  const Grid g = make_grid(2, 32.0, 128);
  for (double c : {1.0, 32.0}) {
    const PhysParams p = unit(c);
    const GroundState gs = solve_ground_state(Multiplier::relativistic(g, p), SolverConfig{});
    const ExtensionReport r = extension_check(gs.field, p);
    CHECK(r.passed);
    CHECK(r.rows.size() == g.size());
    CHECK(r.max_equality_gap <= 1e-12);
    CHECK(r.min_perturbed_excess > 0.0);
    CHECK(r.summed_gap <= 1e-10);
    const std::string csv = extension_csv(r);
    CHECK(csv.rfind("mode,xi_sq,lhs,rhs,gap\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(g.size() + 1));
  }
}
