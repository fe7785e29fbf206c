#include <doctest.h>

#include <mhdlab/spacetime.hpp>

using namespace mhdlab;

namespace {

SpaceTimeField cos_wave(const Grid& g, int nt, Real window) {
  // u(t,y) = cos(t) cos(y1) over an integer number of cycles
  SpaceTimeField u(g, 0.0, window / nt, nt);
  for (int j = 0; j < nt; ++j) {
    const Real t = u.time(j);
    for_each_point(g, [&](std::int64_t i, Real x0, Real, Real) {
      u.slices[j].v[i] = std::cos(t) * std::cos(x0);
    });
  }
  return u;
}

} // namespace

TEST_CASE("product of single modes has exactly four spectrum entries") {
  const Grid g = Grid::square2d(8);
  SpaceTimeField u = cos_wave(g, 16, 2.0 * kTwoPi); // two full cycles
  SpaceTimeSpectrum s = spacetime_transform(u);
  const Real top = s.coef.abs().maxCoeff();
  int nonzero = 0;
  for (std::int64_t i = 0; i < s.coef.size(); ++i)
    if (std::abs(s.coef[i]) > 1e-10 * top) ++nonzero;
  CHECK(nonzero == 4);
}

TEST_CASE("constant stack transforms to a single DC entry") {
  const Grid g = Grid::square2d(8);
  SpaceTimeField u(g, 0.0, 0.1, 8);
  for (auto& f : u.slices) f.v.setConstant(2.5);
  SpaceTimeSpectrum s = spacetime_transform(u);
  const Real top = s.coef.abs().maxCoeff();
  int nonzero = 0;
  for (std::int64_t i = 0; i < s.coef.size(); ++i)
    if (std::abs(s.coef[i]) > 1e-12 * top) ++nonzero;
  CHECK(nonzero == 1);
  CHECK(std::abs(s.coef[0]) == doctest::Approx(top));
}

TEST_CASE("space-time Parseval against the direct sum") {
  const Grid g = Grid::square2d(8);
  SpaceTimeField u(g, -1.0, 0.25, 12);
  for (int j = 0; j < 12; ++j)
    for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) {
      u.slices[j].v[i] = std::sin(x0 + 0.3 * j) * std::cos(2.0 * x1 - 0.1 * j * j);
    });
  Real direct = 0.0;
  for (const Field& f : u.slices) direct += f.v.square().sum() * g.dvol() * u.dt;
  SpaceTimeSpectrum s = spacetime_transform(u);
  const Real viaspec =
      s.coef.abs2().sum() * std::pow(g.dxi(), g.n) * s.dtau() / std::pow(kTwoPi, g.n + 1);
  CHECK(viaspec == doctest::Approx(direct).epsilon(1e-12));
  // and the round trip
  SpaceTimeField back = spacetime_inverse(s, u.t0);
  for (int j = 0; j < 12; ++j) CHECK((back.slices[j].v - u.slices[j].v).abs().maxCoeff() < 1e-12);
}

TEST_CASE("cone-supported data passes the modulation envelope unchanged") {
  const Grid g = Grid::square2d(8);
  // u = cos(t - y1) on a 2 pi window: support sits on |tau| = |xi_1| = 1
  const int nt = 16;
  SpaceTimeField u(g, 0.0, kTwoPi / nt, nt);
  for (int j = 0; j < nt; ++j) {
    const Real t = u.time(j);
    for_each_point(g, [&](std::int64_t i, Real x0, Real, Real) {
      u.slices[j].v[i] = std::cos(t - x0);
    });
  }
  SpaceTimeField out = modulation_multiplier(u, make_cutoff_phi(), 1.0);
  for (int j = 0; j < nt; ++j) CHECK((out.slices[j].v - u.slices[j].v).abs().maxCoeff() < 1e-12);
}

TEST_CASE("modulation split is an exact partition and F2 avoids the cone") {
  const Grid g = Grid::square2d(16);
  const int nt = 16;
  SpaceTimeField u(g, -1.0, 2.0 / nt, nt);
  for (int j = 0; j < nt; ++j)
    for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) {
      u.slices[j].v[i] = std::sin(3.0 * x0 + x1 + 0.7 * j) + 0.2 * std::cos(x0 - 1.3 * j);
    });
  const Real scale = 0.5;
  SpaceTimeField f1 = modulation_multiplier(u, make_cutoff_phi(), scale);
  SpaceTimeField f2 = u;
  for (int j = 0; j < nt; ++j) f2.slices[j].v -= f1.slices[j].v;
  for (int j = 0; j < nt; ++j)
    CHECK((f1.slices[j].v + f2.slices[j].v - u.slices[j].v).abs().maxCoeff() < 1e-15);

  SpaceTimeSpectrum s2 = spacetime_transform(f2);
  const Real top = spacetime_transform(u).coef.abs().maxCoeff();
  for_each_st_mode(s2, [&](std::int64_t idx, Real tau, Real K1, Real, Real) {
    const Real arg = scale * (1.0 + std::abs(std::abs(tau) - std::abs(K1)));
    if (arg <= 2.0) CHECK(std::abs(s2.coef[idx]) < 1e-12 * top);
  });
}

TEST_CASE("spectral time derivative of a pure tone") {
  const Grid g = Grid::square2d(8);
  const int nt = 32;
  SpaceTimeField u(g, 0.0, kTwoPi / nt, nt);
  for (int j = 0; j < nt; ++j) u.slices[j].v.setConstant(std::sin(3.0 * u.time(j)));
  SpaceTimeField du = time_derivative(u);
  for (int j = 0; j < nt; ++j) {
    const Real want = 3.0 * std::cos(3.0 * u.time(j));
    CHECK(std::abs(du.slices[j].v[0] - want) < 1e-10);
  }
}
