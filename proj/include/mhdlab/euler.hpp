#pragma once

#include "mhdlab/random_fields.hpp"

namespace mhdlab {

/// Velocity/magnetic pair for the Eulerian system, both divergence-free.
struct EulerState {
  Grid grid;
  VectorField v;
  VectorField b;
  Real t = 0.0;

  EulerState() = default;
  explicit EulerState(const Grid& g) : grid(g), v(g), b(g) {}
};

/// Spectral projection onto divergence-free fields (zero mode untouched).
VectorField leray_project(const VectorField& v);

/// Ideal-MHD right-hand side with 2/3-rule dealiasing on the quadratic terms:
///   dv = -P[(v.grad)v - (b.grad)b],   db = -(v.grad)b + (b.grad)v,
/// both projected after dealiasing.
void mhd_rhs(const EulerState& s, VectorField& dv, VectorField& db);

/// Classical RK4 step; projection applied at each stage.
/// Rejects dt above the advective CFL bound 0.5*h/max(|v|+|b|).
EulerState step_rk4(const EulerState& s, Real dt);

struct EulerRunResult {
  std::vector<EulerState> history; // uniform dt, slot 0 = initial state
  std::vector<Real> energy;        // 0.5*int(|v|^2+|b|^2) per slot
};

EulerRunResult run_euler(const EulerState& initial, Real dt, int nsteps);

/// Off-grid evaluation of band-limited fields by direct truncated Fourier
/// summation with per-axis phase tables (spectrally exact composition).
class FourierEvaluator {
public:
  explicit FourierEvaluator(const std::vector<Spectrum>& components);
  /// Evaluates every component at one physical point.
  void eval(const std::array<Real, 3>& x, Real* out) const;
  int components() const { return static_cast<int>(ncomp_); }

private:
  Grid grid_;
  size_t ncomp_ = 0;
  std::array<int, 3> kmax_ = {0, 0, 0};
  // Compact row-major block of coefficients, k_a in [-kmax_a, kmax_a].
  std::vector<ArrayXc> block_;
};

/// Integrates dx/dt = v(t, x) for every grid label over the history window
/// with RK4; mid-stage velocity spectra come from quadratic interpolation of
/// neighbouring history slots. Returns a flow map at each history time.
std::vector<FlowMap> advect_trajectories(const std::vector<EulerState>& history, Real dt);

/// Composes the Eulerian fields with the flow map: out(y) = field(x(t,y)).
void push_forward_fields(const EulerState& state, const FlowMap& map, VectorField& b_lag,
                         VectorField& v_lag);

/// Default experiment data: random divergence-free v0 with spectral decay
/// <xi>^-sigma, dealias-truncated, scaled to max |v| = amplitude; b0 = e1
/// plus an optional divergence-free perturbation built the same way.
struct ScenarioParams {
  Real decay = 4.0;
  Real amplitude = 0.1;
  std::uint64_t seed = 1;
  Real b_perturbation = 0.0;
  int band_limit = 0; // extra per-axis frequency cap; 0 = the dealias limit
};

EulerState make_scenario(const Grid& grid, const ScenarioParams& p);

Real total_energy(const EulerState& s);

} // namespace mhdlab
