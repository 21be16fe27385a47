#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace fraclp {

/// Real-to-half-complex transforms on an nx^d periodic grid (FFTW backend).
/// Engines are shared and immutable after creation; execution is
/// reentrant, so one engine serves any number of concurrent callers.
class FftEngine {
 public:
  static std::shared_ptr<const FftEngine> get(int dim, int nx);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  int dim() const { return dim_; }
  int nx() const { return nx_; }
  std::size_t real_size() const { return real_size_; }
  /// nx^(d-1) * (nx/2 + 1): last axis is halved.
  std::size_t half_size() const { return half_size_; }

  /// Unnormalized forward transform sum_j g_j e^{-2 pi i k.j/nx}.
  void forward(const double* in, std::complex<double>* out) const;
  /// Unnormalized inverse; `in` is clobbered.
  void inverse(std::complex<double>* in, double* out) const;
  /// Full complex transforms (sign -1 forward, +1 backward), unnormalized.
  void forward_complex(const std::complex<double>* in, std::complex<double>* out) const;
  void backward_complex(const std::complex<double>* in, std::complex<double>* out) const;

  /// Signed integer wavenumbers of half-spectrum entry s (unused axes are 0).
  std::array<int, 3> half_wavenumber(std::size_t s) const;
  /// |k|^2 (integer lattice) per half-spectrum entry.
  const std::vector<double>& half_k_sq() const { return half_k_sq_; }
  /// Signed integer wavenumbers of full-spectrum entry (row-major).
  std::array<int, 3> full_wavenumber(std::size_t s) const;

 private:
  FftEngine(int dim, int nx);

  int dim_;
  int nx_;
  std::size_t real_size_;
  std::size_t half_size_;
  std::vector<double> half_k_sq_;
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
  void* plan_c2c_fwd_ = nullptr;
  void* plan_c2c_bwd_ = nullptr;
};

/// Version string of the FFT backend.
std::string fft_backend_version();

inline int signed_wavenumber(int k, int n) { return k < n / 2 ? k : k - n; }

}  // namespace fraclp
