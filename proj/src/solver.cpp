#include "prnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>

#include "prnls/error.hpp"

namespace prnls {

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0)) fail(ErrorKind::config, "tol_residual must be > 0");
  if (max_iter < 1) fail(ErrorKind::config, "max_iter must be >= 1");
  if (gamma && !(*gamma > 0.0 && std::isfinite(*gamma)))
    fail(ErrorKind::config, "gamma must be positive");
  if (!(init_width > 0.0)) fail(ErrorKind::config, "init_width must be > 0");
  if (!(fallback_step > 0.0)) fail(ErrorKind::config, "fallback_step must be > 0");
}

RealField gaussian(const Grid& grid, double width,
                   const std::array<double, 3>& center) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto idx = grid.unflatten(k);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      const auto ud = static_cast<std::size_t>(d);
      const double x = grid.coord(idx[ud]) - center[ud];
      r2 += x * x;
    }
    v[k] = std::exp(-r2 / (2.0 * width * width));
  }
  return RealField(grid, std::move(v));
}

namespace {

using cplx = std::complex<double>;

struct IterationState {
  SpectralField spectrum;
  double quadratic;
  double residual;
};

std::vector<double> positive_power(const RealField& u, double exponent) {
  std::vector<double> v(u.values.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = u.values[k] > 0.0 ? std::pow(u.values[k], exponent) : 0.0;
  return v;
}

// Spectrum, Q and the relative residual of u in one pass.
IterationState evaluate(const RealField& u, const Multiplier& M) {
  SpectralField U = to_spectral(u);
  const auto table = M.table();
  const double mu = M.params().mu;
  SpectralField AU(U.grid);
  double q = 0.0;
  for (std::size_t k = 0; k < U.coeffs.size(); ++k) {
    const double w = table[k] + mu;
    q += w * std::norm(U.coeffs[k]);
    AU.coeffs[k] = w * U.coeffs[k];
  }
  q *= U.grid.mode_volume();
  const RealField lhs = to_physical(AU);
  const double p = M.params().p;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const double x = u.values[k];
    const double r = lhs.values[k] - std::copysign(std::pow(std::abs(x), p - 1.0), x);
    num += r * r;
    den += x * x;
  }
  const double res = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return {std::move(U), q, res};
}

// (A + mu)^{-1} applied to physical samples.
RealField resolvent(const Multiplier& M, const Grid& g, std::vector<double> v) {
  SpectralField F = to_spectral(RealField(g, std::move(v)));
  const auto table = M.table();
  const double mu = M.params().mu;
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) F.coeffs[k] /= table[k] + mu;
  return to_physical(F);
}

RealField initial_guess(const Multiplier& M, const SolverConfig& cfg) {
  if (cfg.init_field) {
    if (!(cfg.init_field->grid == M.grid()))
      fail(ErrorKind::invalid_argument, "initial field grid mismatch");
    return nehari_project(*cfg.init_field, M).projected;
  }
  return nehari_project(gaussian(M.grid(), cfg.init_width), M).projected;
}

bool all_finite(const RealField& f) {
  return std::all_of(f.values.begin(), f.values.end(),
                     [](double x) { return std::isfinite(x); });
}

GroundState finish(RealField u, const Multiplier& M, int iterations,
                   bool converged) {
  if (converged) {
    u = nehari_project(u, M).projected;
    u = recenter(u).field;
  }
  GroundState gs{u, energy(u, M), iterations, converged, M.params(), 0.0};
  gs.boundary_ratio = boundary_ratio(gs.field);
  return gs;
}

// Recentering a converged state moves it off the grid fixed point by the
// aliasing of its shift. Returns the recentered field when that is enough
// to break the tolerance, so the caller can iterate further from it.
std::optional<RealField> needs_settling(const RealField& u, const Multiplier& M,
                                        const SolverConfig& cfg, int& rounds) {
  if (rounds >= 3) return std::nullopt;
  RealField moved = recenter(nehari_project(u, M).projected).field;
  if (evaluate(moved, M).residual <= cfg.tol_residual) return std::nullopt;
  ++rounds;
  return moved;
}

}  // namespace

GroundState solve_ground_state(const Multiplier& M, const SolverConfig& cfg) {
  cfg.validate();
  M.params().validate();
  const double p = M.params().p;
  const double gamma = cfg.gamma.value_or((p - 1.0) / (p - 2.0));
  const Grid& g = M.grid();

  RealField u = initial_guess(M, cfg);
  int it = 0, rounds = 0;
  for (;; ++it) {
    IterationState st = evaluate(u, M);
    if (st.residual <= cfg.tol_residual) {
      auto moved = needs_settling(u, M, cfg, rounds);
      if (!moved) return finish(std::move(u), M, it, true);
      u = std::move(*moved);
      st = evaluate(u, M);
    }
    if (it >= cfg.max_iter) break;

    std::vector<double> source = positive_power(u, p - 1.0);
    double overlap = 0.0;
    for (std::size_t k = 0; k < source.size(); ++k)
      overlap += source[k] * u.values[k];
    overlap *= g.cell_volume();
    if (!(overlap > 0.0)) break;

    const double stabilizer = std::pow(st.quadratic / overlap, gamma);
    RealField next = resolvent(M, g, std::move(source));
    for (double& x : next.values) x *= stabilizer;
    if (!all_finite(next) || norm_l2(next) > cfg.blowup_norm)
      fail(ErrorKind::numeric, "Petviashvili iteration blew up at iteration " +
                                   std::to_string(it + 1));
    u = std::move(next);
  }
  return finish(std::move(u), M, it, false);
}

GroundState projected_gradient_solve(const Multiplier& M,
                                     const SolverConfig& cfg) {
  cfg.validate();
  M.params().validate();
  const double p = M.params().p;
  const double tau = cfg.fallback_step;
  const Grid& g = M.grid();

  RealField v = initial_guess(M, cfg);
  int it = 0, rounds = 0;
  for (;; ++it) {
    IterationState st = evaluate(v, M);
    if (!std::isfinite(st.residual)) break;
    if (st.residual <= cfg.tol_residual) {
      auto moved = needs_settling(v, M, cfg, rounds);
      if (!moved) return finish(std::move(v), M, it, true);
      v = std::move(*moved);
      st = evaluate(v, M);
    }
    if (it >= cfg.max_iter) break;

    const RealField pulled = resolvent(M, g, positive_power(v, p - 1.0));
    std::vector<double> w(v.values.size());
    for (std::size_t k = 0; k < w.size(); ++k)
      w[k] = (1.0 - tau) * v.values[k] + tau * pulled.values[k];
    RealField stepped(g);
    stepped.values = std::move(w);
    if (!all_finite(stepped) || !(lp_integral(stepped, p) > 0.0)) break;
    RealField next = nehari_project(stepped, M).projected;
    if (!all_finite(next)) break;
    v = std::move(next);
  }
  return finish(std::move(v), M, it, false);
}

namespace {

struct LocalJet {
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
};

// Value, gradient and Hessian of the trigonometric interpolant at x.
LocalJet jet(const SpectralField& F, const std::array<double, 3>& x) {
  const Grid& g = F.grid;
  const int n = g.dim();
  const int N = g.points();
  // per-axis factor and its first two derivatives
  std::array<std::vector<std::array<cplx, 3>>, 3> axis;
  for (int d = 0; d < n; ++d) {
    auto& a = axis[static_cast<std::size_t>(d)];
    a.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      const double xi = g.freq(i);
      const double arg = xi * x[static_cast<std::size_t>(d)];
      if (i == N / 2) {
        a[static_cast<std::size_t>(i)] = {cplx(std::cos(arg)),
                                          cplx(-xi * std::sin(arg)),
                                          cplx(-xi * xi * std::cos(arg))};
      } else {
        const cplx e = std::polar(1.0, arg);
        a[static_cast<std::size_t>(i)] = {e, cplx(0.0, xi) * e, -xi * xi * e};
      }
    }
  }
  LocalJet out;
  cplx val = 0.0;
  std::array<cplx, 3> gr{};
  std::array<std::array<cplx, 3>, 3> he{};
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
    const auto idx = g.unflatten(k);
    std::array<const std::array<cplx, 3>*, 3> f{};
    for (int d = 0; d < n; ++d)
      f[static_cast<std::size_t>(d)] =
          &axis[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
    auto factor = [&](int d, int order) { return (*f[static_cast<std::size_t>(d)])[static_cast<std::size_t>(order)]; };
    cplx base = 1.0;
    for (int d = 0; d < n; ++d) base *= factor(d, 0);
    const cplx c = F.coeffs[k];
    val += c * base;
    for (int a = 0; a < n; ++a) {
      cplx ga = c;
      for (int d = 0; d < n; ++d) ga *= factor(d, d == a ? 1 : 0);
      gr[static_cast<std::size_t>(a)] += ga;
      for (int b = a; b < n; ++b) {
        cplx hab = c;
        for (int d = 0; d < n; ++d) {
          const int order = (d == a) + (d == b);
          hab *= factor(d, order);
        }
        he[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += hab;
      }
    }
  }
  const double s = std::pow(2.0 * std::numbers::pi, -0.5 * n) * g.mode_volume();
  out.value = val.real() * s;
  for (int a = 0; a < n; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    out.grad[ua] = gr[ua].real() * s;
    for (int b = a; b < n; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      out.hess[ua][ub] = out.hess[ub][ua] = he[ua][ub].real() * s;
    }
  }
  return out;
}

// Solves H d = -g for a negative definite H; empty when H is not.
std::optional<std::array<double, 3>> newton_step(const LocalJet& j, int n) {
  const auto& H = j.hess;
  std::array<double, 3> d{};
  if (n == 2) {
    const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
    if (!(H[0][0] < 0.0 && det > 0.0)) return std::nullopt;
    d[0] = -(H[1][1] * j.grad[0] - H[0][1] * j.grad[1]) / det;
    d[1] = -(-H[1][0] * j.grad[0] + H[0][0] * j.grad[1]) / det;
    return d;
  }
  const double m1 = H[0][0];
  const double m2 = H[0][0] * H[1][1] - H[0][1] * H[1][0];
  const double det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                     H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                     H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
  if (!(m1 < 0.0 && m2 > 0.0 && det < 0.0)) return std::nullopt;
  // Cramer's rule
  for (int col = 0; col < 3; ++col) {
    auto A = H;
    for (int r = 0; r < 3; ++r)
      A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] =
          -j.grad[static_cast<std::size_t>(r)];
    const double dc = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                      A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                      A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    d[static_cast<std::size_t>(col)] = dc / det;
  }
  return d;
}

}  // namespace

Recentered recenter(const RealField& f) {
  const Grid& g = f.grid;
  const int n = g.dim();
  const int N = g.points();
  const auto it = std::max_element(f.values.begin(), f.values.end());
  const auto peak = g.unflatten(static_cast<std::size_t>(it - f.values.begin()));

  std::vector<double> shifted(f.values.size());
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    auto idx = g.unflatten(k);
    for (int d = 0; d < n; ++d) {
      auto& i = idx[static_cast<std::size_t>(d)];
      i = ((i + N / 2 - peak[static_cast<std::size_t>(d)]) % N + N) % N;
    }
    shifted[g.flatten(idx)] = f.values[k];
  }
  RealField out(g, std::move(shifted));

  // Sub-grid correction towards the maximum of the interpolant.
  SpectralField F = to_spectral(out);
  std::array<double, 3> x{};
  const double h = g.spacing();
  bool ok = false;
  for (int iter = 0; iter < 12; ++iter) {
    const auto step = newton_step(jet(F, x), n);
    if (!step) break;
    double size = 0.0;
    for (int d = 0; d < n; ++d) {
      x[static_cast<std::size_t>(d)] += (*step)[static_cast<std::size_t>(d)];
      size = std::max(size, std::abs((*step)[static_cast<std::size_t>(d)]));
    }
    if (size <= 1e-14 * h) {
      ok = true;
      break;
    }
  }
  double offset = 0.0;
  for (int d = 0; d < n; ++d) offset = std::max(offset, std::abs(x[static_cast<std::size_t>(d)]));
  if (!ok || offset > h) return {std::move(out), true};
  if (offset <= 1e-13 * h) return {std::move(out), false};

  for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
    const auto idx = g.unflatten(k);
    cplx phase = 1.0;
    for (int d = 0; d < n; ++d) {
      const int i = idx[static_cast<std::size_t>(d)];
      const double arg = g.freq(i) * x[static_cast<std::size_t>(d)];
      phase *= i == N / 2 ? cplx(std::cos(arg)) : std::polar(1.0, arg);
    }
    F.coeffs[k] *= phase;
  }
  return {to_physical(F), false};
}

namespace {

std::vector<std::array<double, 3>> probe_directions(int n) {
  std::vector<std::array<double, 3>> dirs;
  if (n == 2) {
    constexpr int count = 16;
    for (int j = 0; j < count; ++j) {
      const double th = 2.0 * std::numbers::pi * (j + 0.25) / count;
      dirs.push_back({std::cos(th), std::sin(th), 0.0});
    }
  } else {
    // Fibonacci sphere
    constexpr int count = 24;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / count;
      const double r = std::sqrt(1.0 - z * z);
      dirs.push_back({r * std::cos(golden * j), r * std::sin(golden * j), z});
    }
  }
  return dirs;
}

}  // namespace

double radial_scatter(const RealField& f) {
  const Grid& g = f.grid;
  const double peak = std::max(std::abs(f.max()), std::abs(f.min()));
  if (peak == 0.0) return 0.0;
  const SpectralField F = to_spectral(f);
  const auto dirs = probe_directions(g.dim());
  const double h = g.spacing();
  const int shells = static_cast<int>(std::floor(0.5 * g.length() / h)) - 1;
  double worst = 0.0;
  for (int s = 1; s <= shells; ++s) {
    const double r = s * h;
    std::vector<double> shell;
    shell.reserve(dirs.size());
    for (const auto& d : dirs) shell.push_back(interpolate(F, {r * d[0], r * d[1], r * d[2]}));
    const double mean = std::accumulate(shell.begin(), shell.end(), 0.0) / static_cast<double>(shell.size());
    for (double v : shell) worst = std::max(worst, std::abs(v - mean));
  }
  return worst / peak;
}

double boundary_ratio(const RealField& f) {
  const Grid& g = f.grid;
  double peak = 0.0;
  double face = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const double a = std::abs(f.values[k]);
    peak = std::max(peak, a);
    const auto idx = g.unflatten(k);
    bool on_face = false;
    for (int d = 0; d < g.dim(); ++d)
      on_face = on_face || idx[static_cast<std::size_t>(d)] == 0;
    if (on_face) face = std::max(face, a);
  }
  return peak > 0.0 ? face / peak : 0.0;
}

}  // namespace prnls

namespace prnls {

GroundState solve_with_fallback(const Multiplier& M, const SolverConfig& cfg) {
  try {
    GroundState gs = solve_ground_state(M, cfg);
    if (gs.converged) return gs;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numeric) throw;
  }
  return projected_gradient_solve(M, cfg);
}

}  // namespace prnls
