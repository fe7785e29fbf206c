#pragma once

#include <span>

#include "mhdlab/spacetime.hpp"

namespace mhdlab {

/// Parameters of the weighted norms: spatial H^{a,b}, space-time H^{a,b}_theta
/// (weight <xi>^a <xi_1>^b <||tau|-|xi_1||>^theta), and the composite norm
/// |f| = ||f||_{H^{a,b}_theta} + ||df/dt||_{H^{a,b-1}_theta}.
struct NormSpec {
  enum class Kind { spatial, spacetime, composite };
  Real a = 0.0;
  Real b = 0.0;
  Real theta = 0.0;
  Kind kind = Kind::spacetime;
};

/// Reproducible pairwise reduction.
Real pairwise_sum(std::span<const Real> x);

Real sobolev_norm(const Field& f, Real a, Real b = 0.0);
Real sobolev_norm(const Spectrum& s, Real a, Real b = 0.0);

Real wave_sobolev_norm(const SpaceTimeField& u, const NormSpec& spec);
Real wave_sobolev_norm(const SpaceTimeSpectrum& s, const NormSpec& spec);

/// Composite norm; the time derivative is taken spectrally in tau.
Real composite_norm(const SpaceTimeField& u, const NormSpec& spec);
/// Composite norm with a caller-supplied exact time derivative stack.
Real composite_norm(const SpaceTimeField& u, const SpaceTimeField& du, const NormSpec& spec);

/// H^theta(R) norm of a 1-D time profile sampled on a periodic window.
Real time_profile_norm(const ArrayXr& samples, Real dt, Real theta);

/// l2 combination over tensor/vector components.
Real sobolev_norm(const VectorField& v, Real a, Real b = 0.0);
Real sobolev_norm(const TensorField& t, Real a, Real b = 0.0);

} // namespace mhdlab
