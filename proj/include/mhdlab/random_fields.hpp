#pragma once

#include "mhdlab/spacetime.hpp"

namespace mhdlab {

/// Label-space map y -> x(y) = y + displacement(y), displacement periodic.
/// Maps built by exact shear composition also carry the exact Jacobian.
struct FlowMap {
  Grid grid;
  VectorField displacement;
  Real t = 0.0;
  bool has_jacobian = false;
  TensorField jacobian;

  FlowMap() = default;
  explicit FlowMap(const Grid& g) : grid(g), displacement(g) {}
};

/// Deterministic per-mode hash RNG: the coefficient of an integer frequency
/// depends only on (seed, salt, k), so refining the grid keeps the shared
/// modes bit-identical.
std::uint64_t splitmix64(std::uint64_t x);
Real hash_uniform(std::uint64_t seed, std::uint64_t salt, int k0, int k1, int k2, int k3 = 0);

/// Random real field with coefficient magnitude <|xi|>^-sigma, independent
/// uniform phases (conjugate-symmetrized), Nyquist planes zeroed, unit L2.
/// If aligned_phases is set, every coefficient is real positive instead (the
/// coherent, resonance-stacking variant used by the null-form control study).
Field sample_random_field(const Grid& grid, Real sigma, std::uint64_t seed,
                          bool aligned_phases = false);

/// Random real space-time stack with magnitude <|(tau,xi)|>^-sigma on the
/// (scaled) space-time frequency lattice, unit space-time L2.
SpaceTimeField sample_random_spacetime(const Grid& grid, Real t0, Real dt, int nt, Real sigma,
                                       std::uint64_t seed);

/// Time-1 flow of a random smooth divergence-free field, composed from exact
/// single-mode shear maps, so det(dx/dy) = 1 to the accuracy of the spectral
/// differentiation of the displacement.
FlowMap sample_volume_preserving_map(const Grid& grid, Real amplitude, std::uint64_t seed);

/// The deformation gradient of the map: the exact composed Jacobian when the
/// map carries one, otherwise I + spectral gradient of the displacement.
TensorField flow_map_deformation(const FlowMap& map);

} // namespace mhdlab
