#include "mhdlab/random_fields.hpp"

#include <cmath>

#include "mhdlab/norms.hpp"

namespace mhdlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Real hash_uniform(std::uint64_t seed, std::uint64_t salt, int k0, int k1, int k2, int k3) {
  auto enc = [](int k) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(k + 4096)); };
  std::uint64_t h = splitmix64(seed ^ splitmix64(salt));
  h = splitmix64(h ^ (enc(k0) | (enc(k1) << 16)));
  h = splitmix64(h ^ (enc(k2) | (enc(k3) << 16)));
  return static_cast<Real>(h >> 11) * 0x1.0p-53;
}

namespace {

bool is_canonical(int k0, int k1, int k2, int k3) {
  if (k3 != 0) return k3 > 0;
  if (k0 != 0) return k0 > 0;
  if (k1 != 0) return k1 > 0;
  return k2 > 0;
}

} // namespace

Field sample_random_field(const Grid& grid, Real sigma, std::uint64_t seed, bool aligned_phases) {
  if (sigma < 0.0) throw ConfigError("sample_random_field: sigma must be >= 0");
  Spectrum s(grid);
  const Real k0scale = grid.dxi();
  const int ny0 = grid.sizes[0] / 2, ny1 = grid.sizes[1] / 2;
  const int ny2 = (grid.n == 3) ? grid.sizes[2] / 2 : 0;
  for_each_mode(grid, [&](std::int64_t idx, int a, int b, int c) {
    if (a == ny0 || b == ny1 || (grid.n == 3 && c == ny2)) return; // Nyquist left empty
    const Real mag =
        std::pow(jb(k0scale * std::sqrt(Real(a) * a + Real(b) * b + Real(c) * c)), -sigma);
    if (a == 0 && b == 0 && c == 0) {
      s.coef[idx] = Complex(mag, 0.0);
      return;
    }
    if (aligned_phases) {
      s.coef[idx] = Complex(mag, 0.0);
      return;
    }
    const bool canon = is_canonical(a, b, c, 0);
    const Real phase =
        kTwoPi * (canon ? hash_uniform(seed, 0x5eedf1e1dULL, a, b, c)
                        : hash_uniform(seed, 0x5eedf1e1dULL, -a, -b, -c));
    const Complex z = std::polar(mag, canon ? phase : -phase);
    s.coef[idx] = z;
  });
  Field f = to_field(s);
  const Real l2 = sobolev_norm(f, 0.0, 0.0);
  if (l2 > 0.0) f.v /= l2;
  return f;
}

SpaceTimeField sample_random_spacetime(const Grid& grid, Real t0, Real dt, int nt, Real sigma,
                                       std::uint64_t seed) {
  SpaceTimeSpectrum s;
  s.grid = grid;
  s.dt = dt;
  s.nt = nt;
  s.coef = ArrayXc::Zero(nt * grid.points());
  const Real k0scale = grid.dxi();
  const Real dtau = s.dtau();
  const int ny0 = grid.sizes[0] / 2, ny1 = grid.sizes[1] / 2;
  const int ny2 = (grid.n == 3) ? grid.sizes[2] / 2 : 0;
  const std::int64_t np = grid.points();
  for (int jt = 0; jt < nt; ++jt) {
    const int kt = freq_of_index(jt, nt);
    if (kt == nt / 2) continue;
    const Real tau = dtau * kt;
    const std::int64_t base = jt * np;
    for_each_mode(grid, [&](std::int64_t idx, int a, int b, int c) {
      if (a == ny0 || b == ny1 || (grid.n == 3 && c == ny2)) return;
      const Real r2 = tau * tau + k0scale * k0scale * (Real(a) * a + Real(b) * b + Real(c) * c);
      const Real mag = std::pow(jb(std::sqrt(r2)), -sigma);
      if (kt == 0 && a == 0 && b == 0 && c == 0) {
        s.coef[base + idx] = Complex(mag, 0.0);
        return;
      }
      const bool canon = is_canonical(a, b, c, kt);
      const Real phase =
          kTwoPi * (canon ? hash_uniform(seed, 0x57f1e1dULL, a, b, c, kt)
                          : hash_uniform(seed, 0x57f1e1dULL, -a, -b, -c, -kt));
      s.coef[base + idx] = std::polar(mag, canon ? phase : -phase);
    });
  }
  SpaceTimeField u = spacetime_inverse(s, t0);
  const Real l2 = wave_sobolev_norm(u, NormSpec{0.0, 0.0, 0.0, NormSpec::Kind::spacetime});
  if (l2 > 0.0)
    for (Field& f : u.slices) f.v /= l2;
  return u;
}

namespace {

struct ShearMode {
  std::array<int, 3> k;
  std::array<Real, 3> dir; // flow direction, orthogonal to k
  Real amp;
  Real phase;
};

// Divergence-free single Fourier modes: v_k(x) = amp * sin(k.x + phase) * dir
// with k.dir = 0, so k.x is constant along the flow and each mode integrates
// to an exact volume-preserving shear.
std::vector<ShearMode> shear_modes(const Grid& grid, Real amplitude, std::uint64_t seed) {
  std::vector<ShearMode> modes;
  const int kmax = 3;
  const Real k0scale = grid.dxi();
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b) {
      const int cmax = (grid.n == 3) ? kmax : 0;
      for (int c = -cmax; c <= cmax; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        if (!is_canonical(a, b, c, 0)) continue;
        const Real kn = std::sqrt(Real(a) * a + Real(b) * b + Real(c) * c);
        ShearMode m;
        m.k = {a, b, c};
        m.amp = amplitude * std::pow(jb(k0scale * kn), -3.0);
        m.phase = kTwoPi * hash_uniform(seed, 0xf10aULL, a, b, c);
        if (grid.n == 2) {
          m.dir = {-b / kn, a / kn, 0.0};
        } else {
          // Any unit vector orthogonal to k, chosen deterministically.
          const Real t = kTwoPi * hash_uniform(seed, 0xd14ULL, a, b, c);
          std::array<Real, 3> e1, e2;
          if (std::abs(a) <= std::abs(b) && std::abs(a) <= std::abs(c))
            e1 = {0.0, -Real(c), Real(b)};
          else if (std::abs(b) <= std::abs(c))
            e1 = {-Real(c), 0.0, Real(a)};
          else
            e1 = {-Real(b), Real(a), 0.0};
          Real n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
          for (auto& x : e1) x /= n1;
          e2 = {(b * e1[2] - c * e1[1]) / kn, (c * e1[0] - a * e1[2]) / kn,
                (a * e1[1] - b * e1[0]) / kn};
          for (int d = 0; d < 3; ++d) m.dir[d] = std::cos(t) * e1[d] + std::sin(t) * e2[d];
        }
        modes.push_back(m);
      }
    }
  return modes;
}

} // namespace

FlowMap sample_volume_preserving_map(const Grid& grid, Real amplitude, std::uint64_t seed) {
  const auto modes = shear_modes(grid, amplitude, seed);
  const Real k0scale = grid.dxi();

  const std::int64_t np = grid.points();
  const int n = grid.n;
  std::vector<std::array<Real, 3>> pos(static_cast<size_t>(np));
  std::vector<std::array<Real, 9>> jac(static_cast<size_t>(np));
  for_each_point(grid, [&](std::int64_t idx, Real x0, Real x1, Real x2) {
    pos[static_cast<size_t>(idx)] = {x0, x1, x2};
    std::array<Real, 9> id{};
    for (int d = 0; d < n; ++d) id[static_cast<size_t>(d * n + d)] = 1.0;
    jac[static_cast<size_t>(idx)] = id;
  });

  // Strang-split composition over [0, 1]. Every substep is an exact shear
  // whose unipotent Jacobian I + c d k^T is chained pointwise, so det = 1
  // holds to machine precision at any resolution.
  const int nsteps = 16;
  const Real h = 1.0 / nsteps;
  auto apply_shear = [&](const ShearMode& m, Real tstep) {
    for (std::int64_t q = 0; q < np; ++q) {
      auto& p = pos[static_cast<size_t>(q)];
      auto& J = jac[static_cast<size_t>(q)];
      const Real arg = k0scale * (m.k[0] * p[0] + m.k[1] * p[1] + m.k[2] * p[2]) + m.phase;
      const Real u = m.amp * std::sin(arg) * tstep;
      const Real c = m.amp * std::cos(arg) * tstep;
      // J <- (I + c dir ktilde^T) J, evaluated before moving the point
      std::array<Real, 3> row{};
      for (int b = 0; b < n; ++b) {
        Real acc = 0.0;
        for (int a = 0; a < n; ++a) acc += k0scale * m.k[a] * J[static_cast<size_t>(a * n + b)];
        row[static_cast<size_t>(b)] = acc;
      }
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b)
          J[static_cast<size_t>(i * n + b)] += c * m.dir[static_cast<size_t>(i)] * row[static_cast<size_t>(b)];
      for (int d = 0; d < n; ++d) p[d] += u * m.dir[static_cast<size_t>(d)];
    }
  };
  for (int s = 0; s < nsteps; ++s) {
    const size_t nm = modes.size();
    for (size_t i = 0; i < nm; ++i) apply_shear(modes[i], 0.5 * h);
    for (size_t i = nm; i-- > 0;) apply_shear(modes[i], 0.5 * h);
  }

  FlowMap map(grid);
  map.t = 1.0;
  map.has_jacobian = true;
  map.jacobian = TensorField(grid);
  for_each_point(grid, [&](std::int64_t idx, Real x0, Real x1, Real x2) {
    const auto& p = pos[static_cast<size_t>(idx)];
    map.displacement[0].v[idx] = p[0] - x0;
    map.displacement[1].v[idx] = p[1] - x1;
    if (grid.n == 3) map.displacement[2].v[idx] = p[2] - x2;
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a)
        map.jacobian(i, a).v[idx] = jac[static_cast<size_t>(idx)][static_cast<size_t>(i * n + a)];
  });
  return map;
}

TensorField flow_map_deformation(const FlowMap& map) {
  if (map.has_jacobian) return map.jacobian;
  TensorField h = TensorField::identity(map.grid);
  for (int i = 0; i < map.grid.n; ++i)
    for (int a = 0; a < map.grid.n; ++a)
      h(i, a).v += spectral_derivative(map.displacement[i], a, 1).v;
  return h;
}

} // namespace mhdlab
