#include "mhdlab/norms.hpp"

#include <cmath>
#include <vector>

namespace mhdlab {

Real pairwise_sum(std::span<const Real> x) {
  if (x.size() <= 32) {
    Real s = 0.0;
    for (Real v : x) s += v;
    return s;
  }
  const size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

Real sobolev_norm(const Spectrum& s, Real a, Real b) {
  const Real k0 = s.grid.dxi();
  std::vector<Real> terms(static_cast<size_t>(s.grid.points()));
  for_each_mode(s.grid, [&](std::int64_t idx, int ka, int kb, int kc) {
    const Real mag = k0 * std::sqrt(Real(ka) * ka + Real(kb) * kb + Real(kc) * kc);
    const Real w = std::pow(jb(mag), a) * std::pow(jb(k0 * ka), b);
    terms[static_cast<size_t>(idx)] = w * w * std::norm(s.coef[idx]);
  });
  const Real dxi_n = std::pow(k0, s.grid.n);
  return std::sqrt(pairwise_sum(terms) * dxi_n / std::pow(kTwoPi, s.grid.n));
}

Real sobolev_norm(const Field& f, Real a, Real b) { return sobolev_norm(to_spectrum(f), a, b); }

Real wave_sobolev_norm(const SpaceTimeSpectrum& s, const NormSpec& spec) {
  const Real k0 = s.grid.dxi();
  std::vector<Real> terms(static_cast<size_t>(s.points()));
  const Real dtau = s.dtau();
  const std::int64_t np = s.grid.points();
  for (int jt = 0; jt < s.nt; ++jt) {
    const Real tau = dtau * freq_of_index(jt, s.nt);
    const std::int64_t base = jt * np;
    for_each_mode(s.grid, [&](std::int64_t idx, int ka, int kb, int kc) {
      const Real mag = k0 * std::sqrt(Real(ka) * ka + Real(kb) * kb + Real(kc) * kc);
      const Real mod = std::abs(std::abs(tau) - std::abs(k0 * ka));
      const Real w =
          std::pow(jb(mag), spec.a) * std::pow(jb(k0 * ka), spec.b) * std::pow(jb(mod), spec.theta);
      terms[static_cast<size_t>(base + idx)] = w * w * std::norm(s.coef[base + idx]);
    });
  }
  const Real dmeas = std::pow(k0, s.grid.n) * dtau;
  return std::sqrt(pairwise_sum(terms) * dmeas / std::pow(kTwoPi, s.grid.n + 1));
}

Real wave_sobolev_norm(const SpaceTimeField& u, const NormSpec& spec) {
  return wave_sobolev_norm(spacetime_transform(u), spec);
}

Real composite_norm(const SpaceTimeField& u, const NormSpec& spec) {
  SpaceTimeSpectrum s = spacetime_transform(u);
  const Real first = wave_sobolev_norm(s, spec);
  time_derivative_inplace(s, 1);
  NormSpec dspec = spec;
  dspec.b = spec.b - 1.0;
  return first + wave_sobolev_norm(s, dspec);
}

Real composite_norm(const SpaceTimeField& u, const SpaceTimeField& du, const NormSpec& spec) {
  NormSpec dspec = spec;
  dspec.b = spec.b - 1.0;
  return wave_sobolev_norm(u, spec) + wave_sobolev_norm(du, dspec);
}

Real time_profile_norm(const ArrayXr& samples, Real dt, Real theta) {
  const int nt = static_cast<int>(samples.size());
  ArrayXc in = samples.cast<Complex>();
  ArrayXc out;
  dft_nd({nt}, in, out, true);
  out *= dt;
  const Real dtau = kTwoPi / (nt * dt);
  std::vector<Real> terms(static_cast<size_t>(nt));
  for (int j = 0; j < nt; ++j) {
    const Real tau = dtau * freq_of_index(j, nt);
    const Real w = std::pow(jb(tau), theta);
    terms[static_cast<size_t>(j)] = w * w * std::norm(out[j]);
  }
  return std::sqrt(pairwise_sum(terms) * dtau / kTwoPi);
}

Real sobolev_norm(const VectorField& v, Real a, Real b) {
  Real acc = 0.0;
  for (const Field& f : v.comp) {
    const Real x = sobolev_norm(f, a, b);
    acc += x * x;
  }
  return std::sqrt(acc);
}

Real sobolev_norm(const TensorField& t, Real a, Real b) {
  Real acc = 0.0;
  for (const Field& f : t.comp) {
    const Real x = sobolev_norm(f, a, b);
    acc += x * x;
  }
  return std::sqrt(acc);
}

} // namespace mhdlab
