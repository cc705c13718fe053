#include "prnls/radial_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "io_util.hpp"
#include "prnls/error.hpp"

namespace prnls {

double RadialProfile::value_at(double r) const {
  if (values.empty()) return 0.0;
  r = std::abs(r);
  const std::size_t last = values.size() - 1;
  const double pos = r / dr;
  if (pos >= static_cast<double>(last)) return r <= r_max + 1e-12 ? values[last] : 0.0;
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values[i] + h10 * dr * slopes[i] + h01 * values[i + 1] +
         h11 * dr * slopes[i + 1];
}

namespace {

struct State {
  double u;
  double v;  // u'
};

double force(double u, const PhysParams& P) {
  return 2.0 * P.m * (P.mu * u - std::copysign(std::pow(std::abs(u), P.p - 1.0), u));
}

State rhs(double r, const State& s, const PhysParams& P) {
  return {s.v, force(s.u, P) - (P.n - 1) / r * s.v};
}

double energy(const State& s, const PhysParams& P) {
  return 0.5 * s.v * s.v -
         2.0 * P.m * (0.5 * P.mu * s.u * s.u - std::pow(std::abs(s.u), P.p) / P.p);
}

State rk4(double r, const State& s, double dr, const PhysParams& P) {
  const State k1 = rhs(r, s, P);
  const State k2 = rhs(r + 0.5 * dr, {s.u + 0.5 * dr * k1.u, s.v + 0.5 * dr * k1.v}, P);
  const State k3 = rhs(r + 0.5 * dr, {s.u + 0.5 * dr * k2.u, s.v + 0.5 * dr * k2.v}, P);
  const State k4 = rhs(r + dr, {s.u + dr * k3.u, s.v + dr * k3.v}, P);
  return {s.u + dr / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
          s.v + dr / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

}  // namespace

Shot shoot(double u0, const PhysParams& params, double r_max, double dr) {
  if (!(u0 > 0.0)) fail(ErrorKind::invalid_argument, "shooting amplitude must be positive");
  if (!(dr > 0.0) || !(r_max > dr))
    fail(ErrorKind::invalid_argument, "need 0 < dr < r_max");
  const PhysParams& P = params;

  RadialProfile prof;
  prof.r_max = r_max;
  prof.dr = dr;
  prof.u0 = u0;
  prof.values.push_back(u0);
  prof.slopes.push_back(0.0);

  // regular expansion about r = 0
  const double curv = force(u0, P) / P.n;
  State s{u0 + 0.5 * curv * dr * dr, curv * dr};
  const double scale = std::max(std::abs(energy({u0, 0.0}, P)), 1e-300);
  double e_prev = energy(s, P);

  const auto steps = static_cast<std::size_t>(std::llround(r_max / dr));
  ShotOutcome outcome = ShotOutcome::decays;
  for (std::size_t i = 1;; ++i) {
    const double r = static_cast<double>(i) * dr;
    if (!std::isfinite(s.u) || !std::isfinite(s.v) || std::abs(s.u) > 1e6 * u0) {
      outcome = ShotOutcome::diverges;
      break;
    }
    if (s.u < 0.0) {
      outcome = ShotOutcome::crosses_zero;
      break;
    }
    prof.values.push_back(s.u);
    prof.slopes.push_back(s.v);
    if (s.v > 0.0 || i >= steps) break;

    s = rk4(r, s, dr, P);
    const double e = energy(s, P);
    if (e - e_prev > 1e-6 * scale)
      fail(ErrorKind::numeric, "step size too large: energy drift detected in shooting");
    e_prev = e;
  }
  prof.r_max = static_cast<double>(prof.values.size() - 1) * dr;
  return {outcome, std::move(prof)};
}

std::pair<double, double> default_bracket(const PhysParams& params) {
  const double rest = std::pow(params.mu, 1.0 / (params.p - 2.0));
  return {0.5 * rest, 10.0 * rest};
}

namespace {

// Shooting only needs to run until the trajectory is classified.
ShotOutcome classify(double u0, const PhysParams& P, const OracleConfig& cfg) {
  return shoot(u0, P, cfg.r_max, cfg.dr).outcome;
}

std::pair<double, double> bisect(const PhysParams& P, std::pair<double, double> bracket,
                                 const OracleConfig& cfg) {
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo))
    fail(ErrorKind::invalid_argument, "invalid bracket: need 0 < lo < hi");
  if (classify(lo, P, cfg) == ShotOutcome::crosses_zero ||
      classify(hi, P, cfg) != ShotOutcome::crosses_zero)
    fail(ErrorKind::invalid_argument,
         "invalid bracket: endpoints must decay (lo) and cross zero (hi)");
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (classify(mid, P, cfg) == ShotOutcome::crosses_zero)
      hi = mid;
    else
      lo = mid;
  }
  return {lo, hi};
}

}  // namespace

double find_ground_u0(const PhysParams& params, std::pair<double, double> bracket,
                      const OracleConfig& cfg) {
  const auto [lo, hi] = bisect(params, bracket, cfg);
  return 0.5 * (lo + hi);
}

RadialProfile ground_profile(const PhysParams& params, const OracleConfig& cfg) {
  const auto [lo, hi] = bisect(params, default_bracket(params), cfg);
  const Shot shot = shoot(lo, params, cfg.r_max, cfg.dr);
  const auto& v = shot.profile.values;

  std::size_t cut = 0;
  while (cut + 1 < v.size() && v[cut] > 1e-4 * lo) ++cut;
  if (v[cut] > 1e-4 * lo)
    fail(ErrorKind::numeric, "shot did not decay far enough before leaving the separatrix");

  RadialProfile out;
  out.r_max = cfg.r_max;
  out.dr = cfg.dr;
  out.u0 = 0.5 * (lo + hi);
  const auto steps = static_cast<std::size_t>(std::llround(cfg.r_max / cfg.dr));
  out.values.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  out.slopes.assign(shot.profile.slopes.begin(),
                    shot.profile.slopes.begin() + static_cast<std::ptrdiff_t>(cut) + 1);

  const double nu = 0.5 * (params.n - 2);
  const double kappa = std::sqrt(2.0 * params.m * params.mu);
  auto tail = [&](double r) { return std::pow(r, -nu) * std::cyl_bessel_k(nu, kappa * r); };
  auto tail_slope = [&](double r) {
    return -kappa * std::pow(r, -nu) * std::cyl_bessel_k(nu + 1.0, kappa * r);
  };
  const double r_cut = static_cast<double>(cut) * cfg.dr;
  const double amp = v[cut] / tail(r_cut);
  for (std::size_t i = cut + 1; i <= steps; ++i) {
    const double r = static_cast<double>(i) * cfg.dr;
    out.values.push_back(amp * tail(r));
    out.slopes.push_back(amp * tail_slope(r));
  }
  return out;
}

double compare_profiles(const RealField& gs, const RadialProfile& prof) {
  const Grid& g = gs.grid;
  const auto r2 = g.radius_sq_table();
  const double h = g.spacing();
  const double peak = *std::max_element(prof.values.begin(), prof.values.end());
  struct Bin {
    double field = 0.0;
    double profile = 0.0;
    int count = 0;
  };
  std::map<long, Bin> bins;
  for (std::size_t k = 0; k < r2.size(); ++k) {
    const double r = std::sqrt(r2[k]);
    if (r > prof.r_max) continue;
    Bin& b = bins[std::lround(r / h)];
    b.field += gs.values[k];
    b.profile += prof.value_at(r);
    ++b.count;
  }
  double worst = 0.0;
  for (const auto& [key, b] : bins)
    worst = std::max(worst, std::abs(b.field - b.profile) / b.count);
  return worst / peak;
}

double compare_profiles(const GroundState& gs, const RadialProfile& prof) {
  return compare_profiles(gs.field, prof);
}

double scaling_closure(const PhysParams& a, const PhysParams& b,
                       const OracleConfig& cfg) {
  if (a.n != b.n || a.p != b.p)
    fail(ErrorKind::invalid_argument, "scaling closure compares equal n and p");
  const RadialProfile pa = ground_profile(a, cfg);
  const RadialProfile pb = ground_profile(b, cfg);
  const double e = 1.0 / (a.p - 2.0);
  // u_a(r) = mu_a^e w(k_a r), u_b(r) = mu_b^e w(k_b r)
  //   => u_b(r) = (mu_b/mu_a)^e u_a((k_b/k_a) r)
  const double amp = std::pow(b.mu / a.mu, e);
  const double stretch = std::sqrt(b.m * b.mu / (a.m * a.mu));
  double worst = std::abs(pb.u0 - amp * pa.u0) / pb.u0;
  for (double r = 0.0; r <= 10.0; r += 0.05) {
    const double rs = stretch * r;
    if (rs > pa.r_max) break;
    worst = std::max(worst, std::abs(pb.value_at(r) - amp * pa.value_at(rs)) / pb.u0);
  }
  return worst;
}

std::string profile_csv(const RadialProfile& prof) {
  std::string out = "r,u\n";
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    out += detail::format_double(static_cast<double>(i) * prof.dr);
    out += ',';
    out += detail::format_double(prof.values[i]);
    out += '\n';
  }
  return out;
}

RealField lift_profile(const RadialProfile& prof, const Grid& grid) {
  const auto r2 = grid.radius_sq_table();
  std::vector<double> v(r2.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = prof.value_at(std::sqrt(r2[k]));
  return RealField(grid, std::move(v));
}

}  // namespace prnls
