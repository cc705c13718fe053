#include "prnls/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fft_plan.hpp"
#include "io_util.hpp"
#include "prnls/error.hpp"

namespace prnls {

void PhysParams::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::config, what); };
  if (!(m > 0.0) || !std::isfinite(m)) bad("m must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) bad("mu must be positive");
  if (!(c >= 1.0)) bad("c must be >= 1");
  if (n < 2) bad("n must be >= 2");
  if (!(p > 2.0) || !(p < critical_exponent()))
    bad("p must lie in (2, 2n/(n-1))");
  // mu == m c^2 is admitted: the trace-side quadratic form stays definite.
  if (std::isfinite(c) && !(mu <= m * c * c)) bad("mu < m c^2 violated");
}

Grid::Grid(int n, double length, int points)
    : n_(n), length_(length), points_(points), size_(1) {
  for (int d = 0; d < n; ++d) size_ *= static_cast<std::size_t>(points);
  freqs_.resize(static_cast<std::size_t>(points));
  const double dxi = 2.0 * std::numbers::pi / length;
  for (int i = 0; i < points; ++i) {
    const int k = i < points / 2 ? i : i - points;
    freqs_[static_cast<std::size_t>(i)] = dxi * k;
  }
}

double Grid::dxi() const { return 2.0 * std::numbers::pi / length_; }

double Grid::cell_volume() const { return std::pow(spacing(), n_); }

double Grid::mode_volume() const { return std::pow(dxi(), n_); }

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  const auto N = static_cast<std::size_t>(points_);
  for (int d = n_ - 1; d >= 0; --d) {
    idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % N);
    flat /= N;
  }
  return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < n_; ++d)
    flat = flat * static_cast<std::size_t>(points_) +
           static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
  return flat;
}

std::vector<double> Grid::xi_sq_table() const {
  std::vector<double> out(size_);
  for (std::size_t k = 0; k < size_; ++k) {
    const auto idx = unflatten(k);
    double s = 0.0;
    for (int d = 0; d < n_; ++d) {
      const double xi = freq(idx[static_cast<std::size_t>(d)]);
      s += xi * xi;
    }
    out[k] = s;
  }
  return out;
}

std::vector<double> Grid::radius_sq_table() const {
  std::vector<double> out(size_);
  for (std::size_t k = 0; k < size_; ++k) {
    const auto idx = unflatten(k);
    double s = 0.0;
    for (int d = 0; d < n_; ++d) {
      const double x = coord(idx[static_cast<std::size_t>(d)]);
      s += x * x;
    }
    out[k] = s;
  }
  return out;
}

bool Grid::operator==(const Grid& other) const {
  return n_ == other.n_ && length_ == other.length_ && points_ == other.points_;
}

Grid make_grid(int n, double length, int points) {
  if (n != 2 && n != 3) fail(ErrorKind::invalid_argument, "n must be 2 or 3");
  if (!(length > 0.0) || !std::isfinite(length))
    fail(ErrorKind::invalid_argument, "L must be positive");
  if (points < 16 || !std::has_single_bit(static_cast<unsigned>(points)))
    fail(ErrorKind::invalid_argument, "N must be a power of two");
  return Grid(n, length, points);
}

RealField::RealField(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

RealField::RealField(Grid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size())
    fail(ErrorKind::invalid_argument, "field size does not match grid");
  for (double x : values)
    if (!std::isfinite(x))
      fail(ErrorKind::numeric, "field contains non-finite values");
}

double RealField::max() const {
  return *std::max_element(values.begin(), values.end());
}

double RealField::min() const {
  return *std::min_element(values.begin(), values.end());
}

SpectralField::SpectralField(Grid g)
    : grid(std::move(g)), coeffs(grid.size()) {}

SpectralField::SpectralField(Grid g, std::vector<std::complex<double>> c)
    : grid(std::move(g)), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size())
    fail(ErrorKind::invalid_argument, "coefficient count does not match grid");
}

namespace {

// (-1)^(i_1+...+i_n): the phase of a box whose origin sits at -L/2.
void apply_center_phase(const Grid& g, std::vector<std::complex<double>>& a,
                        double scale) {
  if (a.size() != g.size()) fail(ErrorKind::invalid_argument, "field size does not match grid");
  const std::size_t N = static_cast<std::size_t>(g.points());
  if (g.dim() == 2) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        a[i * N + j] *= ((i + j) & 1u) ? -scale : scale;
  } else {
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto idx = g.unflatten(k);
      a[k] *= ((idx[0] + idx[1] + idx[2]) & 1) ? -scale : scale;
    }
  }
}

double transform_scale(const Grid& g) {
  return std::pow(2.0 * std::numbers::pi, -0.5 * g.dim());
}

}  // namespace

SpectralField to_spectral(const RealField& f) {
  std::vector<std::complex<double>> buf(f.values.begin(), f.values.end());
  const Grid& g = f.grid;
  detail::dft(buf, g.dim(), g.points(), -1);
  apply_center_phase(g, buf, transform_scale(g) * g.cell_volume());
  return SpectralField(g, std::move(buf));
}

std::vector<std::complex<double>> to_physical_complex(const SpectralField& F) {
  const Grid& g = F.grid;
  std::vector<std::complex<double>> buf = F.coeffs;
  apply_center_phase(g, buf, transform_scale(g) * g.mode_volume());
  detail::dft(buf, g.dim(), g.points(), +1);
  return buf;
}

RealField to_physical(const SpectralField& F) {
  const auto buf = to_physical_complex(F);
  std::vector<double> v(buf.size());
  for (std::size_t k = 0; k < buf.size(); ++k) v[k] = buf[k].real();
  return RealField(F.grid, std::move(v));
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) fail(ErrorKind::invalid_argument, "grid mismatch");
}

}  // namespace

double inner(const RealField& f, const RealField& g) {
  require_same_grid(f.grid, g.grid);
  double acc = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    acc += f.values[k] * g.values[k];
  return acc * f.grid.cell_volume();
}

double norm_l2(const RealField& f) { return std::sqrt(inner(f, f)); }

double lp_integral(const RealField& f, double p) {
  double acc = 0.0;
  for (double x : f.values) acc += std::pow(std::abs(x), p);
  return acc * f.grid.cell_volume();
}

double norm_lp(const RealField& f, double p) {
  return std::pow(lp_integral(f, p), 1.0 / p);
}

double norm_h1(const RealField& f) {
  return std::sqrt(
      spectral_sum(to_spectral(f), [](double s) { return 1.0 + s; }));
}

double norm_hhalf(const RealField& f) {
  return std::sqrt(spectral_sum(to_spectral(f),
                                [](double s) { return std::sqrt(1.0 + s); }));
}

double gradient_norm_sq(const RealField& f) {
  const Grid& g = f.grid;
  const SpectralField F = to_spectral(f);
  double acc = 0.0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    SpectralField D(g);
    for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
      const double xi = g.freq(g.unflatten(k)[static_cast<std::size_t>(axis)]);
      D.coeffs[k] = std::complex<double>(0.0, xi) * F.coeffs[k];
    }
    for (const auto& z : to_physical_complex(D)) acc += std::norm(z);
  }
  return acc * g.cell_volume();
}

RealField prolong(const RealField& f, const Grid& fine) {
  const Grid& g = f.grid;
  if (fine.dim() != g.dim() || fine.length() != g.length() ||
      fine.points() < g.points())
    fail(ErrorKind::invalid_argument, "prolong needs a finer grid of the same box");
  const SpectralField F = to_spectral(f);
  SpectralField Ff(fine);
  const int N = g.points();
  const int Nf = fine.points();
  const int n = g.dim();
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
    const auto idx = g.unflatten(k);
    // Nyquist modes are split evenly between +N/2 and -N/2 on the fine grid.
    std::array<std::array<int, 2>, 3> targets{};
    std::array<int, 3> counts{1, 1, 1};
    double weight = 1.0;
    for (int d = 0; d < n; ++d) {
      const auto ud = static_cast<std::size_t>(d);
      const int i = idx[ud];
      const int kk = i < N / 2 ? i : i - N;
      auto to_fine = [Nf](int s) { return s >= 0 ? s : s + Nf; };
      if (kk == -N / 2) {
        targets[ud] = {to_fine(-N / 2), to_fine(N / 2)};
        counts[ud] = 2;
        weight *= 0.5;
      } else {
        targets[ud] = {to_fine(kk), 0};
      }
    }
    for (int a = 0; a < counts[0]; ++a)
      for (int b = 0; b < (n > 1 ? counts[1] : 1); ++b)
        for (int c = 0; c < (n > 2 ? counts[2] : 1); ++c) {
          std::array<int, 3> t{targets[0][static_cast<std::size_t>(a)],
                               targets[1][static_cast<std::size_t>(b)],
                               targets[2][static_cast<std::size_t>(c)]};
          Ff.coeffs[fine.flatten(t)] += weight * F.coeffs[k];
        }
  }
  return to_physical(Ff);
}

double interpolate(const SpectralField& F, const std::array<double, 3>& x) {
  const Grid& g = F.grid;
  const int N = g.points();
  const int n = g.dim();
  std::array<std::vector<std::complex<double>>, 3> phase;
  for (int d = 0; d < n; ++d) {
    auto& ph = phase[static_cast<std::size_t>(d)];
    ph.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      const double arg = g.freq(i) * x[static_cast<std::size_t>(d)];
      // the lone Nyquist mode contributes its symmetric (cosine) part
      ph[static_cast<std::size_t>(i)] =
          i == N / 2 ? std::complex<double>(std::cos(arg), 0.0)
                     : std::polar(1.0, arg);
    }
  }
  const auto Nz = static_cast<std::size_t>(N);
  std::complex<double> total = 0.0;
  if (n == 2) {
    for (std::size_t i = 0; i < Nz; ++i) {
      std::complex<double> row = 0.0;
      const auto* c = &F.coeffs[i * Nz];
      for (std::size_t j = 0; j < Nz; ++j) row += c[j] * phase[1][j];
      total += row * phase[0][i];
    }
  } else {
    for (std::size_t i = 0; i < Nz; ++i) {
      std::complex<double> plane = 0.0;
      for (std::size_t j = 0; j < Nz; ++j) {
        std::complex<double> row = 0.0;
        const auto* c = &F.coeffs[(i * Nz + j) * Nz];
        for (std::size_t l = 0; l < Nz; ++l) row += c[l] * phase[2][l];
        plane += row * phase[1][j];
      }
      total += plane * phase[0][i];
    }
  }
  return total.real() * transform_scale(g) * g.mode_volume();
}

RealField add(const RealField& a, const RealField& b, double scale_b) {
  require_same_grid(a.grid, b.grid);
  std::vector<double> v(a.values.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = a.values[k] + scale_b * b.values[k];
  return RealField(a.grid, std::move(v));
}

RealField scaled(const RealField& f, double s) {
  std::vector<double> v(f.values);
  for (double& x : v) x *= s;
  return RealField(f.grid, std::move(v));
}

namespace {

nlohmann::json params_to_json(const PhysParams& p) {
  nlohmann::json j;
  j["m"] = p.m;
  j["mu"] = p.mu;
  if (std::isinf(p.c))
    j["c"] = "inf";
  else
    j["c"] = p.c;
  j["p"] = p.p;
  j["n"] = p.n;
  return j;
}

PhysParams params_from_json(const nlohmann::json& j) {
  PhysParams p;
  p.m = j.at("m").get<double>();
  p.mu = j.at("mu").get<double>();
  const auto& c = j.at("c");
  p.c = c.is_string() ? std::numeric_limits<double>::infinity()
                      : c.get<double>();
  p.p = j.at("p").get<double>();
  p.n = j.at("n").get<int>();
  return p;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const RealField& f,
                    const PhysParams& params) {
  nlohmann::json header;
  header["n"] = f.grid.dim();
  header["L"] = f.grid.length();
  header["N"] = f.grid.points();
  header["params"] = params_to_json(params);
  std::string bytes = header.dump();
  bytes.push_back('\n');
  const std::size_t offset = bytes.size();
  bytes.resize(offset + f.values.size() * sizeof(double));
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    auto word = std::bit_cast<std::uint64_t>(f.values[k]);
    if constexpr (std::endian::native == std::endian::big)
      word = __builtin_bswap64(word);
    std::memcpy(bytes.data() + offset + k * sizeof(double), &word,
                sizeof(word));
  }
  detail::write_atomic(path, bytes);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, path.string() + ": bad snapshot header: " + e.what());
  }
  Grid g = make_grid(header.at("n").get<int>(), header.at("L").get<double>(),
                     header.at("N").get<int>());
  std::vector<double> values(g.size());
  for (double& v : values) {
    std::uint64_t word = 0;
    in.read(reinterpret_cast<char*>(&word), sizeof(word));
    if (!in) fail(ErrorKind::io, path.string() + ": truncated snapshot");
    if constexpr (std::endian::native == std::endian::big)
      word = __builtin_bswap64(word);
    v = std::bit_cast<double>(word);
  }
  if (in.peek() != std::char_traits<char>::eof())
    fail(ErrorKind::io, path.string() + ": trailing bytes after snapshot");
  return Snapshot{RealField(g, std::move(values)),
                  params_from_json(header.at("params"))};
}

}  // namespace prnls
