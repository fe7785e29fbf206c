#include "mhdlab/wave_solver.hpp"

#include <cmath>
#include <sstream>

namespace mhdlab {

namespace {

void axis0_second_derivative(const TensorField& g, TensorField& out) {
  for (size_t c = 0; c < g.comp.size(); ++c)
    out.comp[c] = spectral_derivative(g.comp[c], 0, 2);
}

Real wave_cfl_bound(const Grid& grid) {
  // Spectral d2/dy1^2 has top frequency N/2 * (2pi/period); Verlet needs
  // dt * omega_max <= 2, which is tighter than dt <= h1.
  const Real omega_max = (grid.sizes[0] / 2) * grid.dxi();
  return std::min(grid.dx(0), 2.0 / omega_max);
}

} // namespace

void step_wave(TensorField& g, TensorField& gt, const TensorField& forcing, Real dt) {
  require_same_grid(g.grid, forcing.grid, "step_wave");
  const Real bound = wave_cfl_bound(g.grid);
  if (dt > bound) {
    std::ostringstream msg;
    msg << "step_wave: dt = " << dt << " violates the CFL bound " << bound;
    throw NumericalError(msg.str());
  }
  TensorField lap(g.grid);
  axis0_second_derivative(g, lap);
  for (size_t c = 0; c < g.comp.size(); ++c)
    gt.comp[c].v += 0.5 * dt * (lap.comp[c].v + forcing.comp[c].v);
  for (size_t c = 0; c < g.comp.size(); ++c) g.comp[c].v += dt * gt.comp[c].v;
  axis0_second_derivative(g, lap);
  for (size_t c = 0; c < g.comp.size(); ++c)
    gt.comp[c].v += 0.5 * dt * (lap.comp[c].v + forcing.comp[c].v);
}

VectorField velocity_from_ht(const TensorField& ht) {
  const Grid& grid = ht.grid;
  const int n = grid.n;
  VectorField v(grid);
  const Real k0 = grid.dxi();
  for (int i = 0; i < n; ++i) {
    std::vector<Spectrum> s(n);
    for (int a = 0; a < n; ++a) s[a] = to_spectrum(ht(i, a));
    Spectrum out(grid);
    for_each_mode(grid, [&](std::int64_t idx, int a, int b, int c) {
      const Real k[3] = {k0 * a, k0 * b, k0 * c};
      const Real k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      if (k2 == 0.0) return; // mean velocity is conserved and starts at zero
      // Ht^{ia} = d_a v^i = (-i k_a) v_hat  =>  v_hat = sum_a (i k_a) Ht_hat / |k|^2
      Complex acc(0.0, 0.0);
      for (int a2 = 0; a2 < n; ++a2) acc += Complex(0.0, k[a2]) * s[a2].coef[idx];
      out.coef[idx] = acc / k2;
    });
    v[i] = to_field(out);
  }
  return v;
}

Real lagrangian_energy(const TensorField& h, const TensorField& ht) {
  const Grid& grid = h.grid;
  VectorField v = velocity_from_ht(ht);
  Real acc = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    acc += v[i].v.square().sum();
    acc += h(i, 0).v.square().sum(); // dx^i/dy1 = H^{i1}
  }
  return 0.5 * acc * grid.dvol();
}

CoupledResult run_coupled(const VectorField& v0, Real t_end, Real dt, const CoupledOptions& opts) {
  const Grid& grid = v0.grid;
  const Real div = spectral_divergence_norm(v0);
  Real v0scale = 0.0;
  for (int i = 0; i < grid.n; ++i) v0scale = std::max(v0scale, v0[i].max_abs());
  if (div > 1e-8 * (v0scale + 1.0))
    throw NumericalError("run_coupled: v0 is not divergence-free");

  TensorField g(grid), gt(grid);
  for (int i = 0; i < grid.n; ++i)
    for (int a = 0; a < grid.n; ++a) gt(i, a) = spectral_derivative(v0[i], a, 1);
  Real grad_max = 0.0;
  for (const Field& f : gt.comp) grad_max = std::max(grad_max, f.max_abs());
  if (grad_max > 0.5)
    throw NumericalError("run_coupled: sup |grad v0| exceeds the small-data regime (0.5)");

  const int nsteps = static_cast<int>(std::llround(t_end / dt));
  if (std::abs(nsteps * dt - t_end) > 1e-10 * std::max(1.0, t_end))
    throw ConfigError("run_coupled: t_end must be an integer number of steps");

  const TensorField identity = TensorField::identity(grid);

  auto forcing_of = [&](const TensorField& gg, const TensorField& ggt, Real* removed_mean,
                        int* iters) {
    DeformationState st(grid);
    st.H = identity + gg;
    st.Ht = ggt;
    Field rhs = pressure_rhs(st, removed_mean, opts.det_abort);
    PressureSolveInfo info;
    Field q = solve_pressure(st.H, rhs, opts.pressure_tol, &info, 500, opts.det_abort);
    if (iters) *iters = info.iterations;
    TensorField f = wave_forcing(st.H, q, opts.det_abort);
    return std::make_pair(std::move(f), std::move(q));
  };

  CoupledResult result;
  auto push_diag = [&](Real t, Real removed, int iters) {
    const Field d = det(identity + g);
    CoupledDiagnosticsRow row;
    row.t = t;
    row.det_min = d.v.minCoeff();
    row.det_max = d.v.maxCoeff();
    row.curl_residual = curl_compatibility_residual(identity + g);
    row.energy = lagrangian_energy(identity + g, gt);
    row.removed_rhs_mean = removed;
    row.pressure_iterations = iters;
    result.diagnostics.push_back(row);
    const Real dev = std::max(std::abs(row.det_min - 1.0), std::abs(row.det_max - 1.0));
    if (dev > opts.det_abort) {
      std::ostringstream msg;
      msg << "run_coupled: |det H - 1| = " << dev << " at t = " << t
          << " exceeds the abort threshold " << opts.det_abort;
      throw NumericalError(msg.str());
    }
  };
  auto record_state = [&](Real t, const Field& q) {
    DeformationState st(grid);
    st.H = identity + g;
    st.Ht = gt;
    st.q = q;
    st.t = t;
    result.states.push_back(std::move(st));
  };

  Real removed = 0.0;
  int iters = 0;
  auto [forcing, q] = forcing_of(g, gt, &removed, &iters);
  push_diag(0.0, removed, iters);
  record_state(0.0, q);

  for (int m = 0; m < nsteps; ++m) {
    step_wave(g, gt, forcing, dt);
    const Real t = (m + 1) * dt;
    auto [forcing_new, q_new] = forcing_of(g, gt, &removed, &iters);
    if (opts.centered_forcing) {
      // Completes the velocity kick to the time-centred Verlet form.
      for (size_t c = 0; c < gt.comp.size(); ++c)
        gt.comp[c].v += 0.5 * dt * (forcing_new.comp[c].v - forcing.comp[c].v);
    }
    forcing = std::move(forcing_new);
    q = std::move(q_new);
    push_diag(t, removed, iters);
    if ((m + 1) % opts.record_every == 0 || m + 1 == nsteps) record_state(t, q);
  }
  return result;
}

} // namespace mhdlab
