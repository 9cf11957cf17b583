#include "ksdk/spectral/transform.hpp"

#include <fftw3.h>
#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "ksdk/error.hpp"

namespace ksdk {
namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One r2c/c2r plan pair with its own aligned buffers. FFTW_ESTIMATE keeps
// the plan choice (and hence rounding) identical from run to run.
class FftPlan {
 public:
  explicit FftPlan(int n) : n_(n), half_(n / 2 + 1) {
    std::lock_guard lock(planner_mutex());
    real_ = fftw_alloc_real(static_cast<std::size_t>(n) * n);
    spec_ = fftw_alloc_complex(static_cast<std::size_t>(n) * half_);
    forward_ = fftw_plan_dft_r2c_2d(n, n, real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_2d(n, n, spec_, real_, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  int n() const { return n_; }
  int half() const { return half_; }
  double* real() { return real_; }
  fftw_complex* spec() { return spec_; }
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  int n_;
  int half_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

FftPlan& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

// Raise glibc's mmap and trim thresholds above field-temporary sizes.
[[maybe_unused]] const bool allocator_tuned = [] {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 64 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
  return true;
}();

inline int wrap(int k, int n) { return k < 0 ? k + n : k; }

}  // namespace

double RealGrid::min(int c) const {
  const double* p = component(c);
  return *std::min_element(p, p + points());
}

double RealGrid::max(int c) const {
  const double* p = component(c);
  return *std::max_element(p, p + points());
}

double RealGrid::mean(int c) const {
  const double* p = component(c);
  return std::accumulate(p, p + points(), 0.0) / static_cast<double>(points());
}

void to_grid_component(const FourierField& f, int c, double* out, int n) {
  const int M = f.resolution();
  if (n < 2 * M + 2) throw ShapeError("to_grid: grid of size " + std::to_string(n) +
                                      " cannot hold resolution " + std::to_string(M));
  FftPlan& plan = plan_for(n);
  const int half = plan.half();
  fftw_complex* spec = plan.spec();
  // Rows M < k1 < n - M and columns k2 > M carry no retained mode.
  for (int r = M + 1; r < n - M; ++r)
    std::memset(spec + static_cast<std::size_t>(r) * half, 0, sizeof(fftw_complex) * half);
  for (int k1 = -M; k1 <= M; ++k1) {
    fftw_complex* row = spec + static_cast<std::size_t>(wrap(k1, n)) * half;
    for (int k2 = 0; k2 <= M; ++k2) {
      const Complex z = f.at(c, k1, k2);
      row[k2][0] = z.real();
      row[k2][1] = z.imag();
    }
    for (int k2 = M + 1; k2 < half; ++k2) row[k2][0] = row[k2][1] = 0.0;
  }
  plan.backward();
  std::memcpy(out, plan.real(), sizeof(double) * static_cast<std::size_t>(n) * n);
}

void from_grid_component(const double* in, int n, FourierField& out, int c) {
  const int M = out.resolution();
  if (n < 2 * M + 2) throw ShapeError("from_grid: grid of size " + std::to_string(n) +
                                      " cannot resolve resolution " + std::to_string(M));
  FftPlan& plan = plan_for(n);
  const int half = plan.half();
  std::memcpy(plan.real(), in, sizeof(double) * static_cast<std::size_t>(n) * n);
  plan.forward();
  const double scale = 1.0 / (static_cast<double>(n) * n);
  const fftw_complex* spec = plan.spec();
  for (int k1 = -M; k1 <= M; ++k1) {
    const fftw_complex* row = spec + static_cast<std::size_t>(wrap(k1, n)) * half;
    for (int k2 = 0; k2 <= M; ++k2) {
      const Complex z{row[k2][0] * scale, row[k2][1] * scale};
      out.at(c, k1, k2) = z;
      if (k2 > 0) out.at(c, -k1, -k2) = std::conj(z);
    }
  }
  // k2 == 0 column: enforce exact symmetry in k1 and a real mean.
  for (int k1 = 1; k1 <= M; ++k1) out.at(c, -k1, 0) = std::conj(out.at(c, k1, 0));
  out.at(c, 0, 0) = out.at(c, 0, 0).real();
}

RealGrid to_grid(const FourierField& f, int n) {
  const double scale = std::max(1.0, f.max_abs());
  if (!f.is_real() || f.hermitian_defect() > kHermitianTolerance * scale)
    throw SymmetryError("to_grid: field is not Hermitian (defect " +
                        std::to_string(f.hermitian_defect()) + ")");
  RealGrid g(n, f.components());
  for (int c = 0; c < f.components(); ++c) to_grid_component(f, c, g.component(c), n);
  return g;
}

RealGrid to_grid(const FourierField& f) { return to_grid(f, grid_size(f.resolution())); }

FourierField from_grid(const RealGrid& g, int M) {
  FourierField f(M, g.components(), true);
  for (int c = 0; c < g.components(); ++c) from_grid_component(g.component(c), g.n(), f, c);
  return f;
}

}  // namespace ksdk
