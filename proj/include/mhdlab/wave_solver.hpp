#pragma once

#include "mhdlab/lagrangian.hpp"

namespace mhdlab {

/// One velocity-Verlet step of d2G/dt2 = d2G/dy1^2 + F with spectral d2/dy1^2
/// and the forcing frozen over the step. Second-order accurate; run_coupled
/// restores the time-centred forcing with a correction kick.
void step_wave(TensorField& g, TensorField& gt, const TensorField& forcing, Real dt);

struct CoupledOptions {
  Real pressure_tol = 1e-9;
  int record_every = 1;          // store a DeformationState every k steps
  Real det_abort = 1e-3;         // max |det H - 1| before aborting
  bool centered_forcing = true;  // re-evaluate the forcing at the step end
};

struct CoupledDiagnosticsRow {
  Real t = 0.0;
  Real det_min = 0.0, det_max = 0.0;
  Real curl_residual = 0.0;
  Real energy = 0.0; // 0.5*int(|dx/dt|^2 + |dx/dy1|^2)
  Real removed_rhs_mean = 0.0;
  int pressure_iterations = 0;
};

struct CoupledResult {
  std::vector<DeformationState> states;
  std::vector<CoupledDiagnosticsRow> diagnostics; // one row per step (incl. t=0)
};

/// Direct time-stepping of the coupled degenerate wave-elliptic system for
/// G = H - I with data (0, grad v0): pressure_rhs -> solve_pressure ->
/// wave_forcing -> step_wave each step. Monitors det H and curl compatibility.
CoupledResult run_coupled(const VectorField& v0, Real t_end, Real dt,
                          const CoupledOptions& opts = {});

/// Velocity recovered from Ht by spectral antidifferentiation (zero mean);
/// used by the energy functional, valid while curl compatibility holds.
VectorField velocity_from_ht(const TensorField& ht);

Real lagrangian_energy(const TensorField& h, const TensorField& ht);

} // namespace mhdlab
