#include "fraclp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "fraclp/error.hpp"

namespace fraclp {
namespace {

// FFTW's planner is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<const FftEngine> FftEngine::get(int dim, int nx) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const FftEngine>> cache;
  std::lock_guard lock(cache_mutex);
  auto key = std::make_pair(dim, nx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const FftEngine> engine(new FftEngine(dim, nx));
  cache.emplace(key, engine);
  return engine;
}

FftEngine::FftEngine(int dim, int nx) : dim_(dim), nx_(nx) {
  require(dim >= 1 && dim <= 3 && nx >= 2, "fft: unsupported shape");
  real_size_ = 1;
  for (int a = 0; a < dim; ++a) real_size_ *= static_cast<std::size_t>(nx);
  half_size_ = real_size_ / nx * (nx / 2 + 1);

  half_k_sq_.resize(half_size_);
  for (std::size_t s = 0; s < half_size_; ++s) {
    auto k = half_wavenumber(s);
    half_k_sq_[s] = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
  }

  int n[3] = {nx, nx, nx};
  std::vector<double> rbuf(real_size_);
  std::vector<std::complex<double>> cbuf(real_size_);
  auto* c = reinterpret_cast<fftw_complex*>(cbuf.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plan_r2c_ = fftw_plan_dft_r2c(dim, n, rbuf.data(), c, flags);
  plan_c2r_ = fftw_plan_dft_c2r(dim, n, c, rbuf.data(), flags);
  std::vector<std::complex<double>> cbuf2(real_size_);
  auto* c2 = reinterpret_cast<fftw_complex*>(cbuf2.data());
  plan_c2c_fwd_ = fftw_plan_dft(dim, n, c, c2, FFTW_FORWARD, flags);
  plan_c2c_bwd_ = fftw_plan_dft(dim, n, c, c2, FFTW_BACKWARD, flags);
  if (!plan_r2c_ || !plan_c2r_ || !plan_c2c_fwd_ || !plan_c2c_bwd_) throw Error("fft: planning failed");
}

FftEngine::~FftEngine() {
  std::lock_guard lock(planner_mutex());
  for (void* p : {plan_r2c_, plan_c2r_, plan_c2c_fwd_, plan_c2c_bwd_})
    if (p) fftw_destroy_plan(static_cast<fftw_plan>(p));
}

void FftEngine::forward(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void FftEngine::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), reinterpret_cast<fftw_complex*>(in), out);
}

void FftEngine::forward_complex(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_c2c_fwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void FftEngine::backward_complex(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_c2c_bwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::array<int, 3> FftEngine::half_wavenumber(std::size_t s) const {
  std::array<int, 3> k{0, 0, 0};
  const int last = nx_ / 2 + 1;
  k[dim_ - 1] = static_cast<int>(s % last);  // non-negative on the halved axis
  s /= last;
  for (int a = dim_ - 2; a >= 0; --a) {
    k[a] = signed_wavenumber(static_cast<int>(s % nx_), nx_);
    s /= nx_;
  }
  if (k[dim_ - 1] == nx_ / 2) k[dim_ - 1] = -nx_ / 2;
  return k;
}

std::array<int, 3> FftEngine::full_wavenumber(std::size_t s) const {
  std::array<int, 3> k{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = signed_wavenumber(static_cast<int>(s % nx_), nx_);
    s /= nx_;
  }
  return k;
}

std::string fft_backend_version() { return fftw_version; }

}  // namespace fraclp
