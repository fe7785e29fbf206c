#pragma once

#include "mhdlab/wave_solver.hpp"

namespace mhdlab {

/// Tensor-valued stack on the iteration window together with its exact time
/// derivative (each map part contributes its analytic d/dt).
struct TensorStack {
  Grid grid;
  Real t0 = 0.0;
  Real dt = 0.0;
  int nt = 0;
  std::vector<TensorField> val;
  std::vector<TensorField> dval;

  TensorStack() = default;
  TensorStack(const Grid& g, Real t0_, Real dt_, int nt_)
      : grid(g), t0(t0_), dt(dt_), nt(nt_), val(nt_, TensorField(g)), dval(nt_, TensorField(g)) {}
  Real time(int j) const { return t0 + j * dt; }
};

struct PicardConfig {
  Real s = 1.6;
  Real theta = 0.75;
  Real eps = 0.25;
  Real T = 0.0; // 0: derive from the fixed-point scaling, then clamp
  int nt = 64;
  int max_iters = 8;
  Real contraction_tol = 1e-12;
  Real pressure_tol = 1e-9;
  Real map_constant = 1.0;      // measured aggregate linear-estimate constant
  bool correct_u2_data = true;  // cancel the spurious Cauchy data of u2
  Real det_tol = 0.5;

  void validate(int n) const;
};

struct IterateRecord {
  int iteration = 0;
  Real composite_norm = 0.0;
  Real diff_norm = 0.0;
  Real ratio = 0.0; // diff_m / diff_{m-1}, 0 for the first record
};

enum class ContractionVerdict { contracting, stalled, diverging };

struct ContractionReport {
  std::vector<Real> ratios;
  Real rate = 0.0;
  ContractionVerdict verdict = ContractionVerdict::contracting;
  std::string note;
};

const char* verdict_name(ContractionVerdict v);

/// Window length from the fixed-point scaling with measured constant c and
/// data size m, clamped to [1e-3, 0.5].
Real picard_window(Real c, Real m, Real eps, int n);

/// chi(t) * (cos(tD) f + D^{-1} sin(tD) g) per slice, with the exact time
/// derivative stack (product rule on the window profile).
TensorStack homogeneous_part(const TensorField& f, const TensorField& g,
                             const CutoffProfile& window, Real t0, Real dt, int nt);

/// Duhamel integral u1(t) = int_0^t D^{-1} sin((t-t')D) F1(t') dt' by
/// composite trapezoidal quadrature (prefix-sum form, O(nt) transforms).
/// Returns (u1, du1); u1(0) = du1(0) = 0 by construction.
std::pair<SpaceTimeField, SpaceTimeField> duhamel_lowmod(const SpaceTimeField& f1);

struct BoxInversionInfo {
  Real residual = 0.0;       // ||box u2 - F2|| / ||F2||, spectral
  Real cone_energy_frac = 0.0;
};

/// u2 = box^{-1} F2 by exact spectral division off the cone. Rejects inputs
/// with near-cone energy above 1e-12 of the total (a broken splitting).
std::pair<SpaceTimeField, SpaceTimeField> invert_box_highmod(const SpaceTimeField& f2,
                                                             BoxInversionInfo* info = nullptr);

struct PicardMapInfo {
  Real u2_initial_data = 0.0; // L2 size of the (cancelled) u2 Cauchy data
  Real box_residual = 0.0;
  Real forcing_norm = 0.0;
};

/// One application of the fixed-point map: homogeneous flow of (0, grad v0)
/// plus the modulation-split Duhamel/high-modulation inversion of the forcing
/// built from G via pressure_rhs -> solve_pressure -> wave_forcing.
TensorStack picard_map(const TensorStack& g, const PicardConfig& cfg, const VectorField& v0,
                       PicardMapInfo* info = nullptr);

struct PicardRunResult {
  TensorStack fixed_point;
  std::vector<IterateRecord> records;
  ContractionReport report;
  Real window = 0.0;
  std::string failure; // non-empty when an iteration aborted numerically
};

/// Iterates the map from G = 0, recording per-step contraction data. Numerical
/// failures inside an iteration terminate the run with a diverging verdict
/// instead of propagating.
PicardRunResult picard_iterate(const PicardConfig& cfg, const VectorField& v0);

ContractionReport contraction_diagnostics(const std::vector<IterateRecord>& records);

/// Composite norm of a tensor stack (l2 over components, exact derivative).
Real stack_composite_norm(const TensorStack& g, Real s, Real theta);

/// Relative l2 distance between the stack and a run_coupled trajectory on
/// [0, T], sampled at the stack's slice times.
Real picard_vs_coupled_error(const TensorStack& g, const VectorField& v0, Real pressure_tol,
                             int substeps = 8);

} // namespace mhdlab
