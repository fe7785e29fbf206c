#include "mhdlab/euler.hpp"

#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mhdlab {

VectorField leray_project(const VectorField& v) {
  const int n = v.grid.n;
  std::vector<Spectrum> s(n);
  for (int i = 0; i < n; ++i) s[i] = to_spectrum(v[i]);
  for_each_mode(v.grid, [&](std::int64_t idx, int a, int b, int c) {
    const Real k[3] = {Real(a), Real(b), Real(c)};
    const Real k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) return;
    Complex dot(0.0, 0.0);
    for (int i = 0; i < n; ++i) dot += k[i] * s[i].coef[idx];
    for (int i = 0; i < n; ++i) s[i].coef[idx] -= k[i] * dot / k2;
  });
  VectorField out(v.grid);
  for (int i = 0; i < n; ++i) out[i] = to_field(s[i]);
  return out;
}

namespace {

// (w . grad) u, term by term, no dealiasing here.
VectorField advect_term(const VectorField& w, const VectorField& u) {
  const int n = u.grid.n;
  VectorField out(u.grid);
  for (int i = 0; i < n; ++i) {
    Spectrum ui = to_spectrum(u[i]);
    for (int j = 0; j < n; ++j) {
      Spectrum d = ui;
      spectral_derivative_inplace(d, j, 1);
      out[i].v += w[j].v * to_field(d).v;
    }
  }
  return out;
}

void dealias(VectorField& v) {
  for (Field& f : v.comp) {
    Spectrum s = to_spectrum(f);
    dealias_inplace(s);
    f = to_field(s);
  }
}

} // namespace

void mhd_rhs(const EulerState& s, VectorField& dv, VectorField& db) {
  const int n = s.grid.n;
  VectorField vv = advect_term(s.v, s.v);
  VectorField bb = advect_term(s.b, s.b);
  VectorField vb = advect_term(s.v, s.b);
  VectorField bv = advect_term(s.b, s.v);
  dv = VectorField(s.grid);
  db = VectorField(s.grid);
  for (int i = 0; i < n; ++i) {
    dv[i].v = bb[i].v - vv[i].v;
    db[i].v = bv[i].v - vb[i].v;
  }
  dealias(dv);
  dealias(db);
  dv = leray_project(dv);
  db = leray_project(db);
}

EulerState step_rk4(const EulerState& s, Real dt) {
  Real vmax = 0.0;
  for (std::int64_t p = 0; p < s.grid.points(); ++p) {
    Real sv = 0.0, sb = 0.0;
    for (int i = 0; i < s.grid.n; ++i) {
      sv += s.v[i].v[p] * s.v[i].v[p];
      sb += s.b[i].v[p] * s.b[i].v[p];
    }
    vmax = std::max(vmax, std::sqrt(sv) + std::sqrt(sb));
  }
  Real h = s.grid.dx(0);
  for (int a = 1; a < s.grid.n; ++a) h = std::min(h, s.grid.dx(a));
  const Real bound = 0.5 * h / std::max(vmax, 1e-300);
  if (dt > bound) {
    std::ostringstream msg;
    msg << "step_rk4: dt = " << dt << " violates the CFL bound " << bound;
    throw NumericalError(msg.str());
  }

  auto axpy = [&](const EulerState& base, Real a, const VectorField& kv, const VectorField& kb) {
    EulerState r = base;
    for (int i = 0; i < s.grid.n; ++i) {
      r.v[i].v += a * kv[i].v;
      r.b[i].v += a * kb[i].v;
    }
    return r;
  };

  VectorField k1v, k1b, k2v, k2b, k3v, k3b, k4v, k4b;
  mhd_rhs(s, k1v, k1b);
  EulerState s2 = axpy(s, 0.5 * dt, k1v, k1b);
  mhd_rhs(s2, k2v, k2b);
  EulerState s3 = axpy(s, 0.5 * dt, k2v, k2b);
  mhd_rhs(s3, k3v, k3b);
  EulerState s4 = axpy(s, dt, k3v, k3b);
  mhd_rhs(s4, k4v, k4b);

  EulerState out = s;
  for (int i = 0; i < s.grid.n; ++i) {
    out.v[i].v += (dt / 6.0) * (k1v[i].v + 2.0 * k2v[i].v + 2.0 * k3v[i].v + k4v[i].v);
    out.b[i].v += (dt / 6.0) * (k1b[i].v + 2.0 * k2b[i].v + 2.0 * k3b[i].v + k4b[i].v);
  }
  out.t = s.t + dt;
  return out;
}

Real total_energy(const EulerState& s) {
  Real acc = 0.0;
  for (int i = 0; i < s.grid.n; ++i) acc += s.v[i].v.square().sum() + s.b[i].v.square().sum();
  return 0.5 * acc * s.grid.dvol();
}

EulerRunResult run_euler(const EulerState& initial, Real dt, int nsteps) {
  EulerRunResult r;
  r.history.reserve(nsteps + 1);
  r.history.push_back(initial);
  r.energy.push_back(total_energy(initial));
  for (int m = 0; m < nsteps; ++m) {
    r.history.push_back(step_rk4(r.history.back(), dt));
    r.energy.push_back(total_energy(r.history.back()));
  }
  return r;
}

FourierEvaluator::FourierEvaluator(const std::vector<Spectrum>& components) {
  if (components.empty()) throw ConfigError("FourierEvaluator: no components");
  grid_ = components[0].grid;
  ncomp_ = components.size();
  // Active band per axis (coefficients below threshold are dropped).
  const Real cutoff = 1e-14;
  Real cmax = 0.0;
  for (const auto& s : components) cmax = std::max(cmax, s.coef.abs().maxCoeff());
  for (const auto& s : components) {
    for_each_mode(grid_, [&](std::int64_t idx, int a, int b, int c) {
      if (std::abs(s.coef[idx]) > cutoff * cmax) {
        kmax_[0] = std::max(kmax_[0], std::abs(a));
        kmax_[1] = std::max(kmax_[1], std::abs(b));
        kmax_[2] = std::max(kmax_[2], std::abs(c));
      }
    });
  }
  for (int a = 0; a < grid_.n; ++a)
    kmax_[a] = std::min(kmax_[a], grid_.sizes[a] / 2 - 1); // Nyquist never sampled off-grid
  const int w0 = 2 * kmax_[0] + 1, w1 = 2 * kmax_[1] + 1;
  const int w2 = (grid_.n == 3) ? 2 * kmax_[2] + 1 : 1;
  block_.assign(ncomp_, ArrayXc::Zero(std::int64_t(w0) * w1 * w2));
  for (size_t cidx = 0; cidx < ncomp_; ++cidx) {
    for_each_mode(grid_, [&](std::int64_t idx, int a, int b, int c) {
      if (std::abs(a) > kmax_[0] || std::abs(b) > kmax_[1] || std::abs(c) > kmax_[2]) return;
      const std::int64_t pos =
          ((std::int64_t(a + kmax_[0]) * w1) + (b + kmax_[1])) * w2 + ((grid_.n == 3) ? c + kmax_[2] : 0);
      block_[cidx][pos] = components[cidx].coef[idx];
    });
  }
}

void FourierEvaluator::eval(const std::array<Real, 3>& x, Real* out) const {
  const Real k0 = grid_.dxi();
  const int w1 = 2 * kmax_[1] + 1;
  const int w2 = (grid_.n == 3) ? 2 * kmax_[2] + 1 : 1;
  // Phase tables e^{-i k x_a} by recurrence, one sincos per axis.
  thread_local std::vector<Complex> ph0, ph1, ph2;
  auto fill = [&](std::vector<Complex>& ph, int kmax, Real xa) {
    ph.assign(2 * kmax + 1, Complex(1.0, 0.0));
    const Complex step = std::exp(Complex(0.0, -k0 * xa));
    for (int k = 1; k <= kmax; ++k) {
      ph[kmax + k] = ph[kmax + k - 1] * step;
      ph[kmax - k] = std::conj(ph[kmax + k]);
    }
  };
  fill(ph0, kmax_[0], x[0]);
  fill(ph1, kmax_[1], x[1]);
  if (grid_.n == 3) fill(ph2, kmax_[2], x[2]);

  const Real scale = 1.0 / std::pow(kTwoPi, grid_.n) * std::pow(grid_.dxi(), grid_.n);
  for (size_t cidx = 0; cidx < ncomp_; ++cidx) {
    Complex acc(0.0, 0.0);
    const Complex* blk = block_[cidx].data();
    for (int ia = 0; ia < 2 * kmax_[0] + 1; ++ia) {
      Complex row(0.0, 0.0);
      if (grid_.n == 2) {
        const Complex* r = blk + std::int64_t(ia) * w1;
        for (int ib = 0; ib < w1; ++ib) row += r[ib] * ph1[ib];
      } else {
        for (int ib = 0; ib < w1; ++ib) {
          Complex col(0.0, 0.0);
          const Complex* r = blk + (std::int64_t(ia) * w1 + ib) * w2;
          for (int ic = 0; ic < w2; ++ic) col += r[ic] * ph2[ic];
          row += col * ph1[ib];
        }
      }
      acc += row * ph0[ia];
    }
    out[cidx] = acc.real() * scale;
  }
}

namespace {

std::vector<Spectrum> velocity_spectra(const EulerState& s) {
  std::vector<Spectrum> out(s.grid.n);
  for (int i = 0; i < s.grid.n; ++i) out[i] = to_spectrum(s.v[i]);
  return out;
}

// Quadratic interpolation of spectra at the midpoint of interval [m, m+1],
// using the neighbour on the side that exists.
std::vector<Spectrum> midpoint_spectra(const std::vector<std::vector<Spectrum>>& hist, int m) {
  const int last = static_cast<int>(hist.size()) - 1;
  std::vector<Spectrum> out = hist[m];
  for (size_t i = 0; i < out.size(); ++i) {
    if (m + 2 <= last) {
      out[i].coef = 0.375 * hist[m][i].coef + 0.75 * hist[m + 1][i].coef - 0.125 * hist[m + 2][i].coef;
    } else {
      out[i].coef = -0.125 * hist[m - 1][i].coef + 0.75 * hist[m][i].coef + 0.375 * hist[m + 1][i].coef;
    }
  }
  return out;
}

} // namespace

std::vector<FlowMap> advect_trajectories(const std::vector<EulerState>& history, Real dt) {
  if (history.size() < 2) throw ConfigError("advect_trajectories: need at least two states");
  const Grid& g = history[0].grid;
  for (size_t m = 1; m < history.size(); ++m) {
    const Real expect = history[0].t + m * dt;
    if (std::abs(history[m].t - expect) > 1e-10 * std::max(1.0, std::abs(expect)))
      throw ConfigError("advect_trajectories: history is not on a uniform time grid");
  }

  std::vector<std::vector<Spectrum>> spectra(history.size());
  for (size_t m = 0; m < history.size(); ++m) spectra[m] = velocity_spectra(history[m]);

  const std::int64_t np = g.points();
  std::vector<std::array<Real, 3>> pos(static_cast<size_t>(np));
  for_each_point(g, [&](std::int64_t idx, Real x0, Real x1, Real x2) {
    pos[static_cast<size_t>(idx)] = {x0, x1, x2};
  });

  std::vector<FlowMap> maps(history.size(), FlowMap(g));
  auto record = [&](size_t m) {
    maps[m].t = history[m].t;
    for_each_point(g, [&](std::int64_t idx, Real x0, Real x1, Real x2) {
      const auto& p = pos[static_cast<size_t>(idx)];
      maps[m].displacement[0].v[idx] = p[0] - x0;
      maps[m].displacement[1].v[idx] = p[1] - x1;
      if (g.n == 3) maps[m].displacement[2].v[idx] = p[2] - x2;
    });
  };
  record(0);

  for (size_t m = 0; m + 1 < history.size(); ++m) {
    FourierEvaluator ev0(spectra[m]);
    FourierEvaluator evm(midpoint_spectra(spectra, static_cast<int>(m)));
    FourierEvaluator ev1(spectra[m + 1]);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t p = 0; p < np; ++p) {
      auto& x = pos[static_cast<size_t>(p)];
      Real k1[3] = {0, 0, 0}, k2[3] = {0, 0, 0}, k3[3] = {0, 0, 0}, k4[3] = {0, 0, 0};
      std::array<Real, 3> y;
      ev0.eval(x, k1);
      y = {x[0] + 0.5 * dt * k1[0], x[1] + 0.5 * dt * k1[1], x[2] + 0.5 * dt * k1[2]};
      evm.eval(y, k2);
      y = {x[0] + 0.5 * dt * k2[0], x[1] + 0.5 * dt * k2[1], x[2] + 0.5 * dt * k2[2]};
      evm.eval(y, k3);
      y = {x[0] + dt * k3[0], x[1] + dt * k3[1], x[2] + dt * k3[2]};
      ev1.eval(y, k4);
      for (int d = 0; d < g.n; ++d)
        x[d] += (dt / 6.0) * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
    }
    record(m + 1);
  }
  return maps;
}

void push_forward_fields(const EulerState& state, const FlowMap& map, VectorField& b_lag,
                         VectorField& v_lag) {
  if (std::abs(state.t - map.t) > 1e-10 * std::max(1.0, std::abs(state.t)))
    throw ConfigError("push_forward_fields: state and map times differ");
  const Grid& g = state.grid;
  std::vector<Spectrum> spec;
  for (int i = 0; i < g.n; ++i) spec.push_back(to_spectrum(state.b[i]));
  for (int i = 0; i < g.n; ++i) spec.push_back(to_spectrum(state.v[i]));
  FourierEvaluator ev(spec);
  b_lag = VectorField(g);
  v_lag = VectorField(g);
  const std::int64_t np = g.points();
  std::vector<std::array<Real, 3>> pts(static_cast<size_t>(np));
  for_each_point(g, [&](std::int64_t idx, Real x0, Real x1, Real x2) {
    pts[static_cast<size_t>(idx)] = {x0 + map.displacement[0].v[idx], x1 + map.displacement[1].v[idx],
                                     (g.n == 3) ? x2 + map.displacement[2].v[idx] : 0.0};
  });
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t p = 0; p < np; ++p) {
    Real vals[6];
    ev.eval(pts[static_cast<size_t>(p)], vals);
    for (int i = 0; i < g.n; ++i) {
      b_lag[i].v[p] = vals[i];
      v_lag[i].v[p] = vals[g.n + i];
    }
  }
}

EulerState make_scenario(const Grid& grid, const ScenarioParams& p) {
  EulerState s(grid);
  VectorField raw(grid);
  for (int i = 0; i < grid.n; ++i)
    raw[i] = sample_random_field(grid, p.decay, p.seed + 7919 * i);
  raw = leray_project(raw);
  for (int i = 0; i < grid.n; ++i) {
    Spectrum sp = to_spectrum(raw[i]);
    dealias_inplace(sp);
    if (p.band_limit > 0) {
      for_each_mode(grid, [&](std::int64_t idx, int a, int b, int c2) {
        if (std::abs(a) > p.band_limit || std::abs(b) > p.band_limit ||
            std::abs(c2) > p.band_limit)
          sp.coef[idx] = Complex(0.0, 0.0);
      });
    }
    sp.coef[0] = Complex(0.0, 0.0); // zero mean flow
    raw[i] = to_field(sp);
  }
  Real vmax = 0.0;
  for (std::int64_t q = 0; q < grid.points(); ++q) {
    Real sv = 0.0;
    for (int i = 0; i < grid.n; ++i) sv += raw[i].v[q] * raw[i].v[q];
    vmax = std::max(vmax, std::sqrt(sv));
  }
  const Real scale = (vmax > 0.0) ? p.amplitude / vmax : 0.0;
  for (int i = 0; i < grid.n; ++i) s.v[i].v = scale * raw[i].v;

  s.b[0].v.setOnes(); // b0 = e1
  if (p.b_perturbation > 0.0) {
    VectorField braw(grid);
    for (int i = 0; i < grid.n; ++i)
      braw[i] = sample_random_field(grid, p.decay, p.seed + 104729 + 7919 * i);
    braw = leray_project(braw);
    Real bmax = 0.0;
    for (std::int64_t q = 0; q < grid.points(); ++q) {
      Real sb = 0.0;
      for (int i = 0; i < grid.n; ++i) sb += braw[i].v[q] * braw[i].v[q];
      bmax = std::max(bmax, std::sqrt(sb));
    }
    const Real bscale = (bmax > 0.0) ? p.b_perturbation / bmax : 0.0;
    for (int i = 0; i < grid.n; ++i) {
      Spectrum sp = to_spectrum(braw[i]);
      dealias_inplace(sp);
      sp.coef[0] = Complex(0.0, 0.0);
      s.b[i].v += bscale * to_field(sp).v;
    }
  }
  return s;
}

} // namespace mhdlab
