#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace fraclp {

/// Discretization of [a,b) x [-L,L)^d with periodic space and m channels
/// standing in for the Hilbert space H.
struct GridSpec {
  int dim = 1;
  double half_width = 1.0;  // L
  int nx = 64;              // points per axis, power of two
  double t_begin = 0.0;     // a
  double t_end = 1.0;       // b
  int nt = 2;
  int channels = 1;

  /// Throws InvalidArgument on any broken invariant.
  void validate() const;

  double dx() const { return 2.0 * half_width / nx; }
  double dt() const { return (t_end - t_begin) / nt; }
  double cell_volume() const;  // dx^d
  std::size_t points() const;  // nx^d
  double x(int j) const { return -half_width + j * dx(); }
  double t(int i) const { return t_begin + i * dt(); }
  /// Multi-index (row-major, last axis fastest) of a flat spatial index.
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  /// Largest resolved |xi| (Nyquist radius along an axis).
  double nyquist() const;

  bool same_space(const GridSpec& other) const;
  bool operator==(const GridSpec& other) const = default;
};

bool is_power_of_two(int n);

/// Real values on the spatial grid of a GridSpec; time fields are ignored.
class ScalarField {
 public:
  ScalarField(GridSpec spec, std::vector<double> values);
  static ScalarField zeros(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const { return values_.size(); }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// H-valued samples f(t_i, x_j) stored as (time, space, channel), channel fastest.
class SpaceTimeField {
 public:
  SpaceTimeField(GridSpec spec, std::vector<double> values);
  static SpaceTimeField zeros(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  double at(int i, std::size_t j, int k) const {
    return values_[(static_cast<std::size_t>(i) * spec_.points() + j) * spec_.channels + k];
  }
  /// One channel at one time as a scalar field.
  ScalarField slice(int i, int channel) const;
  /// |f(t_i, x_j)|_H squared for every (i, j), time-major.
  std::vector<double> hilbert_norm_sq() const;
  bool is_zero() const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// (sum_ij |f(t_i,x_j)|_H^p dx^d dt)^(1/p), rectangle rule on the grid.
double lp_norm(const SpaceTimeField& f, double p);
/// (sum_j |g(x_j)|^p dx^d)^(1/p).
double lp_norm(const ScalarField& g, double p);
/// L_p norm of (1 - Laplacian)^(s/2) g.
double sobolev_norm(const ScalarField& g, double s, double p);

}  // namespace fraclp
