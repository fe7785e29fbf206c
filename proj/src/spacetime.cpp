#include "mhdlab/spacetime.hpp"

#include <cmath>

namespace mhdlab {

namespace {

std::vector<int> st_dims(const SpaceTimeField& u) {
  std::vector<int> dims;
  dims.push_back(u.nt);
  for (int a = 0; a < u.grid.n; ++a) dims.push_back(u.grid.sizes[a]);
  return dims;
}

} // namespace

SpaceTimeSpectrum spacetime_transform(const SpaceTimeField& u) {
  if (u.nt % 2 != 0) throw ConfigError("spacetime_transform: nt must be even");
  const std::int64_t np = u.grid.points();
  ArrayXc in(u.nt * np);
  for (int j = 0; j < u.nt; ++j) {
    require_same_grid(u.slices[j].grid, u.grid, "spacetime_transform");
    in.segment(j * np, np) = u.slices[j].v.cast<Complex>();
  }
  SpaceTimeSpectrum s;
  s.grid = u.grid;
  s.dt = u.dt;
  s.nt = u.nt;
  dft_nd(st_dims(u), in, s.coef, true);
  s.coef *= u.grid.dvol() * u.dt;
  return s;
}

SpaceTimeField spacetime_inverse(const SpaceTimeSpectrum& s, Real t0) {
  SpaceTimeField u(s.grid, t0, s.dt, s.nt);
  std::vector<int> dims;
  dims.push_back(s.nt);
  for (int a = 0; a < s.grid.n; ++a) dims.push_back(s.grid.sizes[a]);
  ArrayXc out;
  dft_nd(dims, s.coef, out, false);
  const Real scale =
      1.0 / (s.grid.dvol() * s.dt * static_cast<Real>(s.nt) * static_cast<Real>(s.grid.points()));
  const std::int64_t np = s.grid.points();
  Real imag_max = 0.0, real_max = 0.0;
  for (int j = 0; j < s.nt; ++j) {
    u.slices[j].v = out.segment(j * np, np).real() * scale;
    imag_max = std::max(imag_max, out.segment(j * np, np).imag().abs().maxCoeff() * scale);
    real_max = std::max(real_max, u.slices[j].max_abs());
  }
  if (imag_max > 1e-8 * (real_max + 1.0))
    throw NumericalError("spacetime_inverse: result is not real (conjugate symmetry broken)");
  return u;
}

void modulation_multiplier_inplace(SpaceTimeSpectrum& s, const CutoffProfile& profile, Real scale) {
  if (!(scale > 0.0)) throw ConfigError("modulation_multiplier: scale must be positive");
  for_each_st_mode(s, [&](std::int64_t idx, Real tau, Real K1, Real, Real) {
    const Real mod = std::abs(std::abs(tau) - std::abs(K1));
    s.coef[idx] *= profile(scale * (1.0 + mod));
  });
}

SpaceTimeField modulation_multiplier(const SpaceTimeField& u, const CutoffProfile& profile,
                                     Real scale) {
  SpaceTimeSpectrum s = spacetime_transform(u);
  modulation_multiplier_inplace(s, profile, scale);
  return spacetime_inverse(s, u.t0);
}

void apply_lambda_minus_inplace(SpaceTimeSpectrum& s, Real alpha, Real scale) {
  for_each_st_mode(s, [&](std::int64_t idx, Real tau, Real K1, Real, Real) {
    const Real mod = std::abs(std::abs(tau) - std::abs(K1));
    s.coef[idx] *= std::pow(scale * (1.0 + mod), alpha);
  });
}

void time_derivative_inplace(SpaceTimeSpectrum& s, int order) {
  if (order == 0) return;
  const Real dtau = s.dtau();
  const std::int64_t np = s.grid.points();
  for (int jt = 0; jt < s.nt; ++jt) {
    const int k = freq_of_index(jt, s.nt);
    Complex m;
    if (order % 2 == 1 && k == s.nt / 2)
      m = Complex(0.0, 0.0);
    else
      m = std::pow(Complex(0.0, -k * dtau), order);
    s.coef.segment(jt * np, np) *= m;
  }
}

SpaceTimeField time_derivative(const SpaceTimeField& u) {
  SpaceTimeSpectrum s = spacetime_transform(u);
  time_derivative_inplace(s, 1);
  return spacetime_inverse(s, u.t0);
}

} // namespace mhdlab
