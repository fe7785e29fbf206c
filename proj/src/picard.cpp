#include "mhdlab/picard.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mhdlab {

void PicardConfig::validate(int) const {
  if (!(theta > 0.5 && theta < 1.0)) throw ConfigError("picard: theta must lie in (1/2, 1)");
  if (!(eps > 0.0 && eps <= 1.0 - theta)) throw ConfigError("picard: eps must lie in (0, 1-theta]");
  if (T != 0.0 && !(T > 0.0 && T < 1.0)) throw ConfigError("picard: T must lie in (0, 1)");
  if (nt < 8 || nt % 2 != 0) throw ConfigError("picard: nt must be even and >= 8");
  if (max_iters < 1) throw ConfigError("picard: max_iters must be >= 1");
}

const char* verdict_name(ContractionVerdict v) {
  switch (v) {
    case ContractionVerdict::contracting: return "contracting";
    case ContractionVerdict::stalled: return "stalled";
    case ContractionVerdict::diverging: return "diverging";
  }
  return "?";
}

Real picard_window(Real c, Real m, Real eps, int n) {
  const Real p = 3.0 * n + 2.0;
  const Real t = std::pow(m / (1.0 + std::pow(c + 1.0, p) * std::pow(m, p)), 2.0 / eps);
  return std::min(0.5, std::max(1e-3, t));
}

TensorStack homogeneous_part(const TensorField& f, const TensorField& g,
                             const CutoffProfile& window, Real t0, Real dt, int nt) {
  require_same_grid(f.grid, g.grid, "homogeneous_part");
  const Grid& grid = f.grid;
  const int n = grid.n;
  TensorStack out(grid, t0, dt, nt);
  std::vector<Spectrum> fs(n * n), gs(n * n);
  for (int c = 0; c < n * n; ++c) {
    fs[c] = to_spectrum(f.comp[c]);
    gs[c] = to_spectrum(g.comp[c]);
  }
  for (int j = 0; j < nt; ++j) {
    const Real t = out.time(j);
    const Real w = window(t);
    const Real dw = window.derivative(t);
    for (int c = 0; c < n * n; ++c) {
      Spectrum a = fs[c], b = gs[c];
      propagate_spectrum(a, t, WaveMode::cos);
      propagate_spectrum(b, t, WaveMode::sinc);
      a.coef += b.coef; // u0(t)
      Spectrum da = fs[c], db = gs[c];
      propagate_spectrum(da, t, WaveMode::dcos);
      propagate_spectrum(db, t, WaveMode::cos); // d/dt D^{-1} sin(tD) = cos(tD)
      da.coef += db.coef;
      const Field u0 = to_field(a);
      const Field du0 = to_field(da);
      out.val[j].comp[c].v = w * u0.v;
      out.dval[j].comp[c].v = dw * u0.v + w * du0.v;
    }
  }
  return out;
}

std::pair<SpaceTimeField, SpaceTimeField> duhamel_lowmod(const SpaceTimeField& f1) {
  const Grid& grid = f1.grid;
  const int nt = f1.nt;
  const int j0 = static_cast<int>(std::llround(-f1.t0 / f1.dt));
  if (j0 < 0 || j0 >= nt || std::abs(f1.time(j0)) > 1e-12 * std::max(1.0, std::abs(f1.t0)))
    throw ConfigError("duhamel_lowmod: the time grid must contain t = 0");

  const Real k0 = grid.dxi();
  // Per-slice spectra and their cos/sin images at the slice time.
  std::vector<Spectrum> fc(nt), fsin(nt), raw(nt), traw(nt);
  for (int j = 0; j < nt; ++j) {
    raw[j] = to_spectrum(f1.slices[j]);
    fc[j] = raw[j];
    fsin[j] = raw[j];
    const Real t = f1.time(j);
    for_each_mode(grid, [&](std::int64_t idx, int a, int, int) {
      const Real om = std::abs(k0 * a);
      fc[j].coef[idx] *= std::cos(t * om);
      fsin[j].coef[idx] *= std::sin(t * om);
    });
    traw[j] = raw[j];
    traw[j].coef *= t; // for the kappa_1 = 0 limit
  }

  // Signed trapezoid prefixes int_0^{t_j}.
  auto prefix = [&](const std::vector<Spectrum>& x) {
    std::vector<Spectrum> p(nt, Spectrum(grid));
    for (int j = j0; j + 1 < nt; ++j) {
      p[j + 1].coef = p[j].coef + (f1.dt / 2.0) * (x[j].coef + x[j + 1].coef);
    }
    for (int j = j0; j > 0; --j) {
      p[j - 1].coef = p[j].coef - (f1.dt / 2.0) * (x[j].coef + x[j - 1].coef);
    }
    return p;
  };
  const auto pc = prefix(fc);
  const auto ps = prefix(fsin);
  const auto p0 = prefix(raw);
  const auto p1 = prefix(traw);

  SpaceTimeField u1(grid, f1.t0, f1.dt, nt), du1(grid, f1.t0, f1.dt, nt);
  for (int j = 0; j < nt; ++j) {
    const Real t = f1.time(j);
    Spectrum su(grid), sd(grid);
    for_each_mode(grid, [&](std::int64_t idx, int a, int, int) {
      const Real om = std::abs(k0 * a);
      if (a == 0) {
        // sin((t-t')D)/D -> (t-t'):  u1 = t*int F - int t'F
        su.coef[idx] = t * p0[j].coef[idx] - p1[j].coef[idx];
        sd.coef[idx] = p0[j].coef[idx];
      } else {
        const Real st = std::sin(t * om), ct = std::cos(t * om);
        su.coef[idx] = (st * pc[j].coef[idx] - ct * ps[j].coef[idx]) / om;
        sd.coef[idx] = ct * pc[j].coef[idx] + st * ps[j].coef[idx];
      }
    });
    u1.slices[j] = to_field(su);
    du1.slices[j] = to_field(sd);
  }
  return {std::move(u1), std::move(du1)};
}

std::pair<SpaceTimeField, SpaceTimeField> invert_box_highmod(const SpaceTimeField& f2,
                                                             BoxInversionInfo* info) {
  SpaceTimeSpectrum s = spacetime_transform(f2);
  const Real floor = 0.5;
  Real total = 0.0, near_cone = 0.0;
  for_each_st_mode(s, [&](std::int64_t idx, Real tau, Real K1, Real, Real) {
    const Real e = std::norm(s.coef[idx]);
    total += e;
    if (std::abs(K1 * K1 - tau * tau) < floor) near_cone += e;
  });
  if (total > 0.0 && near_cone > 1e-12 * total) {
    std::ostringstream msg;
    msg << "invert_box_highmod: cone-adjacent energy fraction " << near_cone / total
        << " signals a broken modulation splitting";
    throw NumericalError(msg.str());
  }
  SpaceTimeSpectrum u = s;
  for_each_st_mode(u, [&](std::int64_t idx, Real tau, Real K1, Real, Real) {
    const Real sym = K1 * K1 - tau * tau;
    u.coef[idx] = (std::abs(sym) < floor) ? Complex(0.0, 0.0) : u.coef[idx] / sym;
  });
  if (info) {
    // box u2 - F2, evaluated on the same discrete window
    Real num = 0.0;
    for_each_st_mode(u, [&](std::int64_t idx, Real tau, Real K1, Real, Real) {
      const Real sym = K1 * K1 - tau * tau;
      num += std::norm(sym * u.coef[idx] - s.coef[idx]);
    });
    info->residual = (total > 0.0) ? std::sqrt(num / total) : 0.0;
    info->cone_energy_frac = (total > 0.0) ? near_cone / total : 0.0;
  }
  SpaceTimeSpectrum du = u;
  time_derivative_inplace(du, 1);
  return {spacetime_inverse(u, f2.t0), spacetime_inverse(du, f2.t0)};
}

namespace {

SpaceTimeField component_view(const TensorStack& g, int c, bool derivative) {
  SpaceTimeField u(g.grid, g.t0, g.dt, g.nt);
  for (int j = 0; j < g.nt; ++j) u.slices[j] = (derivative ? g.dval[j] : g.val[j]).comp[c];
  return u;
}

} // namespace

Real stack_composite_norm(const TensorStack& g, Real s, Real theta) {
  const int nc = g.grid.n * g.grid.n;
  Real first2 = 0.0, second2 = 0.0;
  const NormSpec spec{s - 1.0, 1.0, theta, NormSpec::Kind::spacetime};
  const NormSpec dspec{s - 1.0, 0.0, theta, NormSpec::Kind::spacetime};
  for (int c = 0; c < nc; ++c) {
    const Real a = wave_sobolev_norm(component_view(g, c, false), spec);
    const Real b = wave_sobolev_norm(component_view(g, c, true), dspec);
    first2 += a * a;
    second2 += b * b;
  }
  return std::sqrt(first2) + std::sqrt(second2);
}

TensorStack picard_map(const TensorStack& g, const PicardConfig& cfg, const VectorField& v0,
                       PicardMapInfo* info) {
  const Grid& grid = g.grid;
  const int n = grid.n;
  const int nt = g.nt;
  const CutoffProfile chi = make_cutoff_chi();
  const CutoffProfile phi = make_cutoff_phi();
  const Real T = -g.t0 / 2.0; // window is [-2T, 2T)

  TensorField w(grid);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) w(i, a) = spectral_derivative(v0[i], a, 1);

  TensorStack out = homogeneous_part(TensorField(grid), w, chi, g.t0, g.dt, nt);

  // Forcing slices from the iterate, windowed by chi(t/T).
  std::vector<TensorField> forcing(nt, TensorField(grid));
  Real forcing_norm2 = 0.0;
  std::string failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int j = 0; j < nt; ++j) {
    try {
      const Real wj = chi(g.time(j) / T);
      if (wj == 0.0) continue;
      DeformationState st(grid);
      st.H = TensorField::identity(grid) + g.val[j];
      st.Ht = g.dval[j];
      Field rhs = pressure_rhs(st, nullptr, cfg.det_tol);
      Field q = solve_pressure(st.H, rhs, cfg.pressure_tol, nullptr, 500, cfg.det_tol);
      TensorField f = wave_forcing(st.H, q, cfg.det_tol);
      forcing[j] = wj * f;
    } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw NumericalError("picard_map: " + failure);
  for (const TensorField& f : forcing)
    for (const Field& c : f.comp) forcing_norm2 += c.v.square().sum() * grid.dvol() * g.dt;

  PicardMapInfo local;
  local.forcing_norm = std::sqrt(forcing_norm2);
  const Real scale = std::sqrt(T);

  for (int c = 0; c < n * n; ++c) {
    SpaceTimeField fw(grid, g.t0, g.dt, nt);
    for (int j = 0; j < nt; ++j) fw.slices[j] = forcing[j].comp[c];

    // F1 by the phi envelope, F2 by subtraction (exact partition).
    SpaceTimeField f1 = modulation_multiplier(fw, phi, scale);
    SpaceTimeField f2 = fw;
    for (int j = 0; j < nt; ++j) f2.slices[j].v -= f1.slices[j].v;

    auto [u1, du1] = duhamel_lowmod(f1);
    BoxInversionInfo box;
    auto [u2, du2] = invert_box_highmod(f2, &box);
    local.box_residual = std::max(local.box_residual, box.residual);

    // chi(t/T) u1 with the product-rule derivative.
    for (int j = 0; j < nt; ++j) {
      const Real t = g.time(j);
      const Real wj = chi(t / T);
      const Real dwj = chi.derivative(t / T) / T;
      out.val[j].comp[c].v += wj * u1.slices[j].v + u2.slices[j].v;
      out.dval[j].comp[c].v += dwj * u1.slices[j].v + wj * du1.slices[j].v + du2.slices[j].v;
    }

    if (cfg.correct_u2_data) {
      // u2 carries spurious Cauchy data at t = 0; cancel it by the free wave
      // it would radiate, which leaves box(MG) = F untouched on [0, T].
      const int j0 = nt / 2;
      const Field c0 = u2.slices[j0];
      const Field c1 = du2.slices[j0];
      const Real size =
          std::sqrt(c0.v.square().sum() + c1.v.square().sum()) * std::sqrt(grid.dvol());
      local.u2_initial_data = std::max(local.u2_initial_data, size);
      Spectrum c0s = to_spectrum(c0), c1s = to_spectrum(c1);
      for (int j = 0; j < nt; ++j) {
        const Real t = g.time(j);
        const Real wj = chi(t);
        const Real dwj = chi.derivative(t);
        Spectrum a = c0s, b = c1s, da = c0s, db = c1s;
        propagate_spectrum(a, t, WaveMode::cos);
        propagate_spectrum(b, t, WaveMode::sinc);
        propagate_spectrum(da, t, WaveMode::dcos);
        propagate_spectrum(db, t, WaveMode::cos);
        a.coef += b.coef;
        da.coef += db.coef;
        const Field corr = to_field(a);
        const Field dcorr = to_field(da);
        out.val[j].comp[c].v -= wj * corr.v;
        out.dval[j].comp[c].v -= dwj * corr.v + wj * dcorr.v;
      }
    }
  }
  if (info) *info = local;
  return out;
}

ContractionReport contraction_diagnostics(const std::vector<IterateRecord>& records) {
  ContractionReport rep;
  if (records.size() < 2) {
    rep.note = "fewer than two records";
    return rep;
  }
  bool finite = true;
  for (size_t m = 1; m < records.size(); ++m) {
    const Real r = records[m].ratio;
    if (!std::isfinite(r)) {
      finite = false;
      continue;
    }
    if (r > 0.0) rep.ratios.push_back(r);
  }
  if (!finite) {
    rep.verdict = ContractionVerdict::diverging;
    rep.rate = std::numeric_limits<Real>::infinity();
    rep.note = "non-finite ratio";
    return rep;
  }
  if (rep.ratios.empty()) {
    rep.verdict = ContractionVerdict::contracting;
    rep.rate = 0.0;
    rep.note = "converged immediately";
    return rep;
  }
  Real logsum = 0.0;
  for (Real r : rep.ratios) logsum += std::log(r);
  rep.rate = std::exp(logsum / rep.ratios.size());
  if (rep.rate > 1.05)
    rep.verdict = ContractionVerdict::diverging;
  else if (rep.rate >= 0.95)
    rep.verdict = ContractionVerdict::stalled;
  else
    rep.verdict = ContractionVerdict::contracting;
  return rep;
}

namespace {

TensorStack stack_diff(const TensorStack& a, const TensorStack& b) {
  TensorStack d(a.grid, a.t0, a.dt, a.nt);
  for (int j = 0; j < a.nt; ++j) {
    d.val[j] = a.val[j] - b.val[j];
    d.dval[j] = a.dval[j] - b.dval[j];
  }
  return d;
}

} // namespace

PicardRunResult picard_iterate(const PicardConfig& cfg, const VectorField& v0) {
  cfg.validate(v0.grid.n);
  PicardRunResult run;
  Real T = cfg.T;
  if (T == 0.0) {
    const Real m = sobolev_norm(v0, cfg.s, 0.0);
    T = picard_window(cfg.map_constant, m, cfg.eps, v0.grid.n);
  }
  run.window = T;

  TensorStack g(v0.grid, -2.0 * T, 4.0 * T / cfg.nt, cfg.nt);
  Real prev_diff = 0.0;
  Real first_norm = 0.0;
  for (int m = 0; m < cfg.max_iters; ++m) {
    TensorStack next;
    try {
      next = picard_map(g, cfg, v0);
    } catch (const NumericalError& e) {
      run.failure = e.what();
      IterateRecord rec;
      rec.iteration = m + 1;
      rec.composite_norm = std::numeric_limits<Real>::infinity();
      rec.diff_norm = std::numeric_limits<Real>::infinity();
      rec.ratio = std::numeric_limits<Real>::infinity();
      run.records.push_back(rec);
      break;
    }
    const Real norm = stack_composite_norm(next, cfg.s, cfg.theta);
    const Real diff = stack_composite_norm(stack_diff(next, g), cfg.s, cfg.theta);
    IterateRecord rec;
    rec.iteration = m + 1;
    rec.composite_norm = norm;
    rec.diff_norm = diff;
    rec.ratio = (m == 0) ? 0.0 : (prev_diff > 0.0 ? diff / prev_diff : 0.0);
    run.records.push_back(rec);
    g = std::move(next);
    if (m == 0) first_norm = std::max(norm, 1e-300);
    if (!std::isfinite(norm) || norm > 1e6 * first_norm) break; // runaway iterates
    if (diff <= cfg.contraction_tol * std::max(norm, 1e-300)) break;
    prev_diff = diff;
  }
  run.fixed_point = std::move(g);
  run.report = contraction_diagnostics(run.records);
  if (!run.failure.empty()) {
    run.report.verdict = ContractionVerdict::diverging;
    run.report.note = run.failure;
  }
  return run;
}

Real picard_vs_coupled_error(const TensorStack& g, const VectorField& v0, Real pressure_tol,
                             int substeps) {
  const int j0 = g.nt / 2;
  const int jn = g.nt / 4; // slices covering [0, T]
  CoupledOptions opts;
  opts.pressure_tol = pressure_tol;
  opts.record_every = substeps;
  const Real dt = g.dt / substeps;
  const Real t_end = jn * g.dt;
  CoupledResult fd = run_coupled(v0, t_end, dt, opts);

  const TensorField identity = TensorField::identity(g.grid);
  Real num = 0.0, den = 0.0;
  for (int j = 0; j <= jn; ++j) {
    // recorded states: t = 0, substeps*dt, ... -> index j
    const TensorField ref = fd.states[j].H - identity;
    const TensorField& pic = g.val[j0 + j];
    for (int c = 0; c < g.grid.n * g.grid.n; ++c) {
      num += (pic.comp[c].v - ref.comp[c].v).square().sum();
      den += ref.comp[c].v.square().sum();
    }
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

} // namespace mhdlab
