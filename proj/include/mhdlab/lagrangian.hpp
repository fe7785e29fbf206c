#pragma once

#include "mhdlab/norms.hpp"

namespace mhdlab {

/// Unknowns of the Lagrangian system at one time: deformation gradient H,
/// its time derivative, and the pressure in label coordinates.
struct DeformationState {
  Grid grid;
  TensorField H;
  TensorField Ht;
  Field q;
  Real t = 0.0;

  DeformationState() = default;
  explicit DeformationState(const Grid& g)
      : grid(g), H(TensorField::identity(g)), Ht(g), q(g) {}
};

/// Adjugate of H via the Levi-Civita contraction; the exact inverse when
/// det H = 1. Satisfies H * cofactor_inverse(H) = det(H) * I for any H.
/// Throws when |det H - 1| exceeds det_tol anywhere.
TensorField cofactor_inverse(const TensorField& h, Real det_tol = 1e-6);

/// Adjugate without the determinant guard (for identities valid for any H).
TensorField adjugate(const TensorField& h);

/// Q0(f, g) = dt(f) dt(g) - d1(f) d1(g), evaluated pointwise with spectral d1.
/// Each argument is the pair (value, time derivative).
Field null_form_q0(const Field& f, const Field& ft, const Field& g, const Field& gt);

/// Right-hand side of the pressure equation,
///   K^{ki} K^{mj} (d1 H^{jk} d1 H^{im} - Ht^{jk} Ht^{im}),  K = H^{-1},
/// mean-subtracted for solvability on the torus; the removed mean is reported.
/// The sign is anchored by the divergence of the momentum equation; it is the
/// one under which det H = 1 and the energy functional survive time stepping.
Field pressure_rhs(const DeformationState& state, Real* removed_mean = nullptr,
                   Real det_tol = 1e-3);

struct PressureSolveInfo {
  int iterations = 0;
  Real relative_residual = 0.0;
  Real min_ellipticity = 0.0;
};

/// Solves div_y(A grad_y q) = rhs with A = K K^T (the Laplacian in Euler
/// coordinates written in divergence form), by conjugate gradients
/// preconditioned with the flat spectral inverse Laplacian. Returns the
/// mean-zero solution; asserts the residual contract.
Field solve_pressure(const TensorField& h, const Field& rhs, Real tol,
                     PressureSolveInfo* info = nullptr, int max_iters = 500,
                     Real det_tol = 1e-3);

/// Wave forcing F^{ia} = -d_a( K^{bi} d_b q ), i.e. -d_{y^a}(d_{x^i} q).
TensorField wave_forcing(const TensorField& h, const Field& q, Real det_tol = 1e-3);

/// Pressure gradient in Euler coordinates: (d_{x^i} q)_i = K^{bi} d_b q.
VectorField euler_pressure_gradient(const TensorField& h, const Field& q, Real det_tol = 1e-3);

/// Max over points and index pairs of |d_b H^{ia} - d_a H^{ib}|.
Real curl_compatibility_residual(const TensorField& h);

} // namespace mhdlab
