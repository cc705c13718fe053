#include <doctest.h>

#include <numbers>

#include "prnls/symbol.hpp"
#include "prnls/solver.hpp"
#include "support.hpp"

using namespace prnls;
using test::rel;

namespace {

PhysParams with(double m, double c) {
  PhysParams p;
  p.m = m;
  p.c = c;
  p.mu = std::min(1.0, m * c * c);
  return p;
}

// Only used here: the textbook form that cancels badly for large c.
double naive_symbol(double xi_sq, double m, double c) {
  return std::sqrt(c * c * xi_sq + m * m * c * c * c * c) - m * c * c;
}

}  // namespace

TEST_CASE("relativistic symbol values") {
  CHECK(relativistic_symbol(0.0, with(1.0, 1.0)) == 0.0);
  CHECK(relativistic_symbol(3.0, with(1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(naive_symbol(3.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

  const double v = relativistic_symbol(1.0, with(1.0, 1e8));
  CHECK(v <= 0.5);
  CHECK(v >= 0.5 - 1.0 / (8e16));
  // The naive form has nothing left at this scale.
  CHECK(std::abs(naive_symbol(1.0, 1.0, 1e8) - 0.5) > 1e-3);
}

TEST_CASE("limit symbol values") {
  CHECK(limit_symbol(0.0, with(1.0, 1.0)) == 0.0);
  CHECK(limit_symbol(2.0, with(1.0, 1.0)) == 1.0);
  CHECK(limit_symbol(8.0, with(2.0, 1.0)) == 2.0);
  PhysParams inf = with(1.0, 1.0);
  inf.c = std::numeric_limits<double>::infinity();
  CHECK(relativistic_symbol(5.0, inf) == limit_symbol(5.0, inf));
}

TEST_CASE("gap and its bound") {
  CHECK(symbol_gap(0.0, with(1.0, 1.0)) == 0.0);
  CHECK(symbol_gap_bound(0.0, with(1.0, 1.0)) == 0.0);

  const double gap = symbol_gap(1.0, with(1.0, 1.0));
  CHECK(gap == doctest::Approx(0.5 - 1.0 / (std::sqrt(2.0) + 1.0)).epsilon(1e-14));
  CHECK(gap == doctest::Approx(0.0857864376).epsilon(1e-9));
  CHECK(gap <= 0.125);
  CHECK(symbol_gap_bound(1.0, with(1.0, 1.0)) == 0.125);

  for (double xi_sq : {0.25, 1.0, 3.0}) {
    for (double c = 8.0; c <= 1024.0; c *= 2.0) {
      const double ratio = symbol_gap(xi_sq, with(1.0, c)) / symbol_gap(xi_sq, with(1.0, 2.0 * c));
      CHECK(ratio >= 3.9);
      CHECK(ratio <= 4.1);
    }
  }
}

TEST_CASE("sandwich holds exactly on the lattice") {
  const Grid g = make_grid(2, 32.0, 256);
  const auto xi_sq = g.xi_sq_table();
  for (double m : {0.5, 1.0, 3.0}) {
    for (double c : {1.0, 10.0, 1e4, 1e8}) {
      const PhysParams p = with(m, c);
      for (double s : xi_sq) {
        const double gap = limit_symbol(s, p) - relativistic_symbol(s, p);
        REQUIRE(gap >= 0.0);
        REQUIRE(gap <= symbol_gap_bound(s, p));
        REQUIRE(symbol_gap(s, p) <= symbol_gap_bound(s, p));
      }
    }
  }
}

TEST_CASE("symbol is increasing in xi and in c") {
  const PhysParams p1 = with(1.0, 1.0);
  double prev = -1.0;
  for (double s = 0.0; s < 1e4; s = 1.5 * s + 0.01) {
    const double v = relativistic_symbol(s, p1);
    CHECK(v > prev);
    prev = v;
  }
  for (double s : {0.1, 1.0, 10.0, 1e3}) {
    double last = 0.0;
    for (double c : {1.0, 1.5, 2.0, 10.0, 1e3, 1e8}) {
      const double v = relativistic_symbol(s, with(1.0, c));
      CHECK(v >= last);
      CHECK(v <= limit_symbol(s, with(1.0, c)));
      last = v;
    }
  }
}

TEST_CASE("naive and stable forms agree where cancellation is mild") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lm(-1.0, 0.5), lc(0.0, 1.5), lx(-3.0, 3.0);
  int tested = 0;
  for (int i = 0; i < 20000; ++i) {
    const double m = std::pow(10.0, lm(rng));
    const double c = std::pow(10.0, lc(rng));
    const double xi_sq = std::pow(10.0, lx(rng));
    const double naive = naive_symbol(xi_sq, m, c);
    // Lost digits: the subtraction cancels m c^2 down to the result.
    if (m * c * c / naive > 1e6) continue;
    ++tested;
    CHECK(rel(naive, relativistic_symbol(xi_sq, with(m, c))) <= 1e-9);
  }
  CHECK(tested > 10000);
}

TEST_CASE("multiplier tables") {
  const Grid g = make_grid(2, 16.0, 32);
  const PhysParams p = with(1.0, 2.0);
  const Multiplier R = Multiplier::relativistic(g, p);
  const Multiplier Lm = Multiplier::limit(g, p);
  CHECK(R.kind() == MultiplierKind::relativistic);
  CHECK(Lm.kind() == MultiplierKind::limit);
  CHECK(R.table()[0] == 0.0);
  CHECK(Lm.table()[0] == 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(R.table()[k] >= 0.0);
    CHECK(R.table()[k] <= Lm.table()[k]);
  }
  CHECK_THROWS(Multiplier::custom(g, p, std::vector<double>(3, 0.0)));
  std::vector<double> bad(g.size(), 1.0);
  bad[7] = -1.0;
  CHECK_THROWS(Multiplier::custom(g, p, bad));
  bad[7] = std::nan("");
  CHECK_THROWS(Multiplier::custom(g, p, bad));
  CHECK(Multiplier::custom(g, p, std::vector<double>(g.size(), 2.0)).kind() ==
        MultiplierKind::custom);
}

TEST_CASE("multiplier acts on a single cosine by its symbol") {
  const double L = 32.0;
  const Grid g = make_grid(2, L, 64);
  const PhysParams p = with(1.0, 1.0);
  const RealField f = test::cos_mode(g);
  const RealField Af = apply_multiplier(Multiplier::relativistic(g, p), f);
  const double a = relativistic_symbol(std::pow(2.0 * std::numbers::pi / L, 2), p);
  for (std::size_t k = 0; k < g.size(); ++k)
    CHECK(Af.values[k] == doctest::Approx(a * f.values[k]).epsilon(1e-12).scale(1.0));

  const RealField z = apply_multiplier(Multiplier::relativistic(g, p), RealField(g));
  for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("limit multiplier is minus half the Laplacian") {
  const Grid g = make_grid(2, 32.0, 256);
  PhysParams p = with(1.0, 1.0);
  const RealField f = gaussian(g, 1.0);
  const RealField Af = apply_multiplier(Multiplier::limit(g, p), f);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unflatten(k);
    const double r2 = std::pow(g.coord(idx[0]), 2) + std::pow(g.coord(idx[1]), 2);
    if (r2 > 100.0) continue;
    err = std::max(err, std::abs(Af.values[k] - 0.5 * (2.0 - r2) * std::exp(-0.5 * r2)));
  }
  CHECK(err <= 1e-8);
}

TEST_CASE("multiplier is self-adjoint") {
  const Grid g = make_grid(2, 16.0, 64);
  for (double c : {1.0, 7.0, 1e6}) {
    const Multiplier M = Multiplier::relativistic(g, with(1.3, c));
    const RealField f = test::random_field(g, 1);
    const RealField h = test::random_field(g, 2);
    const double lhs = inner(apply_multiplier(M, f), h);
    const double rhs = inner(f, apply_multiplier(M, h));
    CHECK(rel(lhs, rhs) <= 1e-11);
  }
  const RealField f = test::random_field(g, 3);
  const Multiplier M = Multiplier::relativistic(g, with(1.0, 2.0));
  CHECK_THROWS(apply_multiplier(M, RealField(make_grid(2, 16.0, 32))));
}

TEST_CASE("multiplier convergence along c") {
  const Grid g = make_grid(2, 32.0, 256);
  const PhysParams p = with(1.0, 1.0);
  const std::vector<double> cs{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const auto e = multiplier_convergence_test(gaussian(g, 1.0), p, cs);
  REQUIRE(e.size() == cs.size());
  for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] < e[i - 1]);
  for (std::size_t i = 4; i < e.size(); ++i) {
    CHECK(e[i] / e[i - 1] >= 0.2);
    CHECK(e[i] / e[i - 1] <= 0.3);
  }
  for (double v : multiplier_convergence_test(RealField(g), p, cs)) CHECK(v == 0.0);
}
