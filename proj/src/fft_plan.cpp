#include "fft_plan.hpp"

#include <fftw3.h>

#include "prnls/error.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace prnls::detail {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int points, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(n, points, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    int dims[3] = {points, points, points};
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(points);
    std::vector<std::complex<double>> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(n, dims, buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dft(std::vector<std::complex<double>>& data, int n, int points,
         int sign) {
  std::size_t expected = 1;
  for (int d = 0; d < n; ++d) expected *= static_cast<std::size_t>(points);
  if (data.size() != expected)
    fail(ErrorKind::invalid_argument, "field size does not match its grid");
  fftw_plan plan = cache().get(n, points, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace prnls::detail
