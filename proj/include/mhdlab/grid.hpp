#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mhdlab/errors.hpp"
#include "mhdlab/types.hpp"

namespace mhdlab {

/// Periodic spatial discretization: n axes (2 or 3), per-axis sample counts,
/// one box length shared by all axes. Axis 0 is the distinguished wave
/// direction y1 of the degenerate operator.
struct Grid {
  int n = 2;
  std::array<int, 3> sizes = {0, 0, 0};
  Real period = kTwoPi;

  Grid() = default;
  Grid(int n_, std::array<int, 3> sizes_, Real period_ = kTwoPi)
      : n(n_), sizes(sizes_), period(period_) {
    validate();
  }
  static Grid square2d(int nx, Real period = kTwoPi) { return Grid(2, {nx, nx, 1}, period); }
  static Grid cube3d(int nx, Real period = kTwoPi) { return Grid(3, {nx, nx, nx}, period); }

  void validate() const {
    if (n != 2 && n != 3) throw ConfigError("grid: dimension must be 2 or 3");
    if (period <= 0.0) throw ConfigError("grid: period must be positive");
    for (int a = 0; a < n; ++a) {
      if (sizes[a] < 4 || sizes[a] % 2 != 0)
        throw ConfigError("grid: sizes must be even and >= 4");
    }
  }

  std::int64_t points() const {
    std::int64_t p = 1;
    for (int a = 0; a < n; ++a) p *= sizes[a];
    return p;
  }
  Real dx(int axis) const { return period / sizes[axis]; }
  /// Cell volume of one sample (quadrature weight of the trapezoid rule).
  Real dvol() const {
    Real v = 1.0;
    for (int a = 0; a < n; ++a) v *= dx(a);
    return v;
  }
  /// Spacing of the physical frequency lattice, per axis: 2*pi/period.
  Real dxi() const { return kTwoPi / period; }

  bool operator==(const Grid& o) const {
    if (n != o.n || period != o.period) return false;
    for (int a = 0; a < n; ++a)
      if (sizes[a] != o.sizes[a]) return false;
    return true;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Integer frequency of storage index i on an axis of N samples:
/// {0,1,...,N/2,-N/2+1,...,-1}, so the frequency set is {-N/2+1,...,N/2}.
inline int freq_of_index(int i, int N) { return (i <= N / 2) ? i : i - N; }

/// Storage index of integer frequency k (k in [-N/2+1, N/2]).
inline int index_of_freq(int k, int N) { return (k >= 0) ? k : k + N; }

/// Calls fn(flat_index, k0, k1, k2) for every mode; k2 = 0 when n = 2.
template <class Fn>
inline void for_each_mode(const Grid& g, Fn&& fn) {
  const int n0 = g.sizes[0];
  const int n1 = g.sizes[1];
  const int n2 = (g.n == 3) ? g.sizes[2] : 1;
  std::int64_t idx = 0;
  for (int i0 = 0; i0 < n0; ++i0) {
    const int k0 = freq_of_index(i0, n0);
    for (int i1 = 0; i1 < n1; ++i1) {
      const int k1 = freq_of_index(i1, n1);
      if (g.n == 2) {
        fn(idx++, k0, k1, 0);
      } else {
        for (int i2 = 0; i2 < n2; ++i2) fn(idx++, k0, k1, freq_of_index(i2, n2));
      }
    }
  }
}

/// Calls fn(flat_index, x0, x1, x2) for every grid point.
template <class Fn>
inline void for_each_point(const Grid& g, Fn&& fn) {
  const int n0 = g.sizes[0];
  const int n1 = g.sizes[1];
  const int n2 = (g.n == 3) ? g.sizes[2] : 1;
  const Real h0 = g.dx(0), h1 = g.dx(1), h2 = (g.n == 3) ? g.dx(2) : 0.0;
  std::int64_t idx = 0;
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1) {
      if (g.n == 2) {
        fn(idx++, i0 * h0, i1 * h1, 0.0);
      } else {
        for (int i2 = 0; i2 < n2; ++i2) fn(idx++, i0 * h0, i1 * h1, i2 * h2);
      }
    }
}

} // namespace mhdlab
