#include "mhdlab/spectral.hpp"

#include <cmath>

namespace mhdlab {

void spectral_derivative_inplace(Spectrum& s, int axis, int order) {
  if (axis < 0 || axis >= s.grid.n) throw ConfigError("spectral_derivative: axis out of range");
  if (order == 0) return;
  const Real k0 = s.grid.dxi();
  const int nyq = s.grid.sizes[axis] / 2;
  for_each_mode(s.grid, [&](std::int64_t idx, int k0i, int k1i, int k2i) {
    const int k = (axis == 0) ? k0i : (axis == 1) ? k1i : k2i;
    if (order % 2 == 1 && k == nyq) {
      s.coef[idx] = Complex(0.0, 0.0); // sign-ambiguous Nyquist
      return;
    }
    // d/dx brings down (-i kappa) under the e^{-i k.x} inverse convention.
    const Complex m = std::pow(Complex(0.0, -k * k0), order);
    s.coef[idx] *= m;
  });
}

Field spectral_derivative(const Field& f, int axis, int order) {
  Spectrum s = to_spectrum(f);
  spectral_derivative_inplace(s, axis, order);
  return to_field(s);
}

namespace {

void apply_spatial_symbol(Spectrum& s, const SymbolSpec& spec) {
  const Real k0 = s.grid.dxi();
  switch (spec.kind) {
    case SymbolSpec::Kind::Lambda:
      for_each_mode(s.grid, [&](std::int64_t idx, int a, int b, int c) {
        const Real mag = k0 * std::sqrt(Real(a) * a + Real(b) * b + Real(c) * c);
        s.coef[idx] *= std::pow(jb(mag), spec.alpha);
      });
      break;
    case SymbolSpec::Kind::Lambda1:
      for_each_mode(s.grid, [&](std::int64_t idx, int a, int, int) {
        s.coef[idx] *= std::pow(jb(k0 * a), spec.alpha);
      });
      break;
    case SymbolSpec::Kind::D: {
      if (spec.alpha < 0.0) {
        // |xi_1|^alpha with alpha < 0 is only defined away from the xi_1 = 0
        // plane; reject inputs whose energy lives there.
        Real plane = 0.0, total = 0.0;
        for_each_mode(s.grid, [&](std::int64_t idx, int a, int, int) {
          const Real e = std::norm(s.coef[idx]);
          total += e;
          if (a == 0) plane += e;
        });
        if (total > 0.0 && plane > 1e-10 * total)
          throw NumericalError("apply_symbol: D(alpha<0) on a field with xi_1 = 0 content");
      }
      for_each_mode(s.grid, [&](std::int64_t idx, int a, int, int) {
        if (a == 0) {
          if (spec.alpha < 0.0)
            s.coef[idx] = Complex(0.0, 0.0);
          else if (spec.alpha > 0.0)
            s.coef[idx] = Complex(0.0, 0.0);
          // alpha == 0 leaves the plane untouched
        } else {
          s.coef[idx] *= std::pow(std::abs(k0 * a), spec.alpha);
        }
      });
      break;
    }
    default:
      throw ConfigError("apply_symbol: LambdaMinus / ModulationEnvelope act on space-time data");
  }
}

} // namespace

Field apply_symbol(const Field& f, const SymbolSpec& spec) {
  Spectrum s = to_spectrum(f);
  apply_spatial_symbol(s, spec);
  return to_field(s);
}

void propagate_spectrum(Spectrum& s, Real t, WaveMode mode) {
  if (!std::isfinite(t)) throw ConfigError("half_wave_propagate: non-finite time");
  const Real k0 = s.grid.dxi();
  for_each_mode(s.grid, [&](std::int64_t idx, int a, int, int) {
    const Real om = std::abs(k0 * a);
    switch (mode) {
      case WaveMode::cos:
        s.coef[idx] *= std::cos(t * om);
        break;
      case WaveMode::sinc:
        s.coef[idx] *= (a == 0) ? t : std::sin(t * om) / om;
        break;
      case WaveMode::dcos: // d/dt of cos(t|xi_1|)
        s.coef[idx] *= -om * std::sin(t * om);
        break;
      case WaveMode::exp_plus:
        s.coef[idx] *= std::exp(Complex(0.0, t * om));
        break;
      case WaveMode::exp_minus:
        s.coef[idx] *= std::exp(Complex(0.0, -t * om));
        break;
    }
  });
}

Field half_wave_propagate(const Field& f, Real t, WaveMode mode) {
  if (mode == WaveMode::exp_plus || mode == WaveMode::exp_minus)
    throw ConfigError("half_wave_propagate: exponential modes return a complex pair");
  Spectrum s = to_spectrum(f);
  propagate_spectrum(s, t, mode);
  return to_field(s);
}

ComplexField half_wave_propagate_exp(const Field& f, Real t, bool plus) {
  Spectrum s = to_spectrum(f);
  propagate_spectrum(s, t, plus ? WaveMode::exp_plus : WaveMode::exp_minus);
  return to_field_complex(s);
}

ComplexField half_wave_propagate_exp(const ComplexField& f, Real t, bool plus) {
  Spectrum s = to_spectrum_complex(f);
  propagate_spectrum(s, t, plus ? WaveMode::exp_plus : WaveMode::exp_minus);
  return to_field_complex(s);
}

void zero_nyquist_inplace(Spectrum& s) {
  const int ny0 = s.grid.sizes[0] / 2;
  const int ny1 = s.grid.sizes[1] / 2;
  const int ny2 = (s.grid.n == 3) ? s.grid.sizes[2] / 2 : -1;
  for_each_mode(s.grid, [&](std::int64_t idx, int a, int b, int c2) {
    if (a == ny0 || b == ny1 || c2 == ny2) s.coef[idx] = Complex(0.0, 0.0);
  });
}

int dealias_limit(int size) { return size / 3; }

void dealias_inplace(Spectrum& s) {
  const int l0 = dealias_limit(s.grid.sizes[0]);
  const int l1 = dealias_limit(s.grid.sizes[1]);
  const int l2 = (s.grid.n == 3) ? dealias_limit(s.grid.sizes[2]) : 0;
  for_each_mode(s.grid, [&](std::int64_t idx, int a, int b, int c) {
    if (std::abs(a) > l0 || std::abs(b) > l1 || (s.grid.n == 3 && std::abs(c) > l2))
      s.coef[idx] = Complex(0.0, 0.0);
  });
}

Real spectral_divergence_norm(const VectorField& v) {
  const int n = v.grid.n;
  Spectrum div(v.grid);
  for (int i = 0; i < n; ++i) {
    Spectrum s = to_spectrum(v[i]);
    spectral_derivative_inplace(s, i, 1);
    div.coef += s.coef;
  }
  return spectrum_l2(div);
}

Field subtract_mean(const Field& f, Real* removed) {
  const Real m = f.mean();
  if (removed) *removed = m;
  Field g(f.grid);
  g.v = f.v - m;
  return g;
}

} // namespace mhdlab
