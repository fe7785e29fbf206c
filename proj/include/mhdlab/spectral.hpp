#pragma once

#include "mhdlab/fft.hpp"

namespace mhdlab {

/// Fourier multipliers acting on purely spatial fields.
///   Lambda(alpha):  <xi>^alpha          (full frequency magnitude)
///   Lambda1(alpha): <xi_1>^alpha        (distinguished axis)
///   D(alpha):       |xi_1|^alpha; alpha < 0 annihilates the xi_1 = 0 plane
///                   and is rejected when that plane carries energy.
/// LambdaMinus / ModulationEnvelope act on space-time data (spacetime.hpp).
struct SymbolSpec {
  enum class Kind { Lambda, Lambda1, D, LambdaMinus, ModulationEnvelope };
  Kind kind = Kind::Lambda;
  Real alpha = 0.0;
  Real scale = 1.0;

  static SymbolSpec lambda(Real a) { return {Kind::Lambda, a, 1.0}; }
  static SymbolSpec lambda1(Real a) { return {Kind::Lambda1, a, 1.0}; }
  static SymbolSpec d(Real a) { return {Kind::D, a, 1.0}; }
  static SymbolSpec lambda_minus(Real a, Real scale = 1.0) { return {Kind::LambdaMinus, a, scale}; }
};

/// Exact derivative of the trigonometric interpolant along one axis.
/// Nyquist modes of odd-order derivatives are zeroed.
Field spectral_derivative(const Field& f, int axis, int order = 1);
void spectral_derivative_inplace(Spectrum& s, int axis, int order);

Field apply_symbol(const Field& f, const SymbolSpec& spec);

/// Half-wave propagators for the degenerate operator: multipliers of
/// e^{+-i t |xi_1|}, cos(t |xi_1|) and sin(t |xi_1|)/|xi_1| (value t at
/// xi_1 = 0, the sinc limit).
enum class WaveMode { exp_plus, exp_minus, cos, sinc, dcos };

Field half_wave_propagate(const Field& f, Real t, WaveMode mode); // cos, sinc
ComplexField half_wave_propagate_exp(const Field& f, Real t, bool plus);
ComplexField half_wave_propagate_exp(const ComplexField& f, Real t, bool plus);

/// Same propagators applied directly to a spectrum (in place).
void propagate_spectrum(Spectrum& s, Real t, WaveMode mode);

/// 2/3-rule mask: zero every mode with |k_a| > floor(N_a/3) on any axis.
void dealias_inplace(Spectrum& s);
int dealias_limit(int size);

/// Mean of the field as the DC coefficient; convenience wrappers.
Field subtract_mean(const Field& f, Real* removed = nullptr);

/// L2 size of the spectral divergence of a vector field.
Real spectral_divergence_norm(const VectorField& v);

/// Zeroes every Nyquist plane (the modes excluded from spectral calculus).
void zero_nyquist_inplace(Spectrum& s);

} // namespace mhdlab
