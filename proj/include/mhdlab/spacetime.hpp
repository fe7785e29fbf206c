#pragma once

#include "mhdlab/cutoff.hpp"
#include "mhdlab/spectral.hpp"

namespace mhdlab {

/// Time-indexed stack of Fields on a uniform time grid. The discrete
/// space-time transform treats the window as periodic; the caller applies any
/// temporal window beforehand.
struct SpaceTimeField {
  Grid grid;
  Real t0 = 0.0;
  Real dt = 0.0;
  int nt = 0;
  std::vector<Field> slices;

  SpaceTimeField() = default;
  SpaceTimeField(const Grid& g, Real t0_, Real dt_, int nt_)
      : grid(g), t0(t0_), dt(dt_), nt(nt_), slices(nt_, Field(g)) {
    if (nt_ < 2 || nt_ % 2 != 0) throw ConfigError("spacetime: nt must be even and >= 2");
  }

  Real time(int j) const { return t0 + j * dt; }
  Real window_length() const { return nt * dt; }
};

/// Full complex space-time spectrum, time axis slowest. Discrete tau
/// frequencies are 2*pi*k/(nt*dt), k in {-nt/2+1, ..., nt/2}; phases are
/// referenced to the first slice.
struct SpaceTimeSpectrum {
  Grid grid;
  Real dt = 0.0;
  int nt = 0;
  ArrayXc coef;

  Real dtau() const { return kTwoPi / (nt * dt); }
  std::int64_t points() const { return nt * grid.points(); }
};

SpaceTimeSpectrum spacetime_transform(const SpaceTimeField& u);
SpaceTimeField spacetime_inverse(const SpaceTimeSpectrum& s, Real t0 = 0.0);

/// Calls fn(flat_index, tau, |kappa_1|, ...) for every space-time mode, with
/// tau and kappa in physical units.
template <class Fn>
inline void for_each_st_mode(const SpaceTimeSpectrum& s, Fn&& fn) {
  const Real dtau = s.dtau();
  const Real k0 = s.grid.dxi();
  const std::int64_t np = s.grid.points();
  for (int jt = 0; jt < s.nt; ++jt) {
    const Real tau = dtau * freq_of_index(jt, s.nt);
    const std::int64_t base = jt * np;
    for_each_mode(s.grid, [&](std::int64_t idx, int a, int b, int c) {
      fn(base + idx, tau, k0 * a, k0 * b, k0 * c);
    });
  }
}

/// Multiplies the spectrum at (tau, xi) by profile(scale * (1 + ||tau|-|xi_1||)).
/// The complementary part is obtained by subtraction, so F1 + F2 = F exactly.
SpaceTimeField modulation_multiplier(const SpaceTimeField& u, const CutoffProfile& profile,
                                     Real scale);
void modulation_multiplier_inplace(SpaceTimeSpectrum& s, const CutoffProfile& profile, Real scale);

/// LambdaMinus(alpha, scale): weight (scale * (1 + ||tau|-|xi_1||))^alpha.
void apply_lambda_minus_inplace(SpaceTimeSpectrum& s, Real alpha, Real scale = 1.0);

/// Spectral time derivative (tau-Nyquist zeroed for odd orders).
void time_derivative_inplace(SpaceTimeSpectrum& s, int order = 1);
SpaceTimeField time_derivative(const SpaceTimeField& u);

} // namespace mhdlab
