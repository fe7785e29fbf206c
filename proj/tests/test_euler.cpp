#include <doctest.h>

#include <mhdlab/euler.hpp>
#include <mhdlab/norms.hpp>

using namespace mhdlab;

namespace {

VectorField gradient_field(const Grid& g) {
  Field phi(g);
  for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) {
    phi.v[i] = std::sin(x0 + 2.0 * x1);
  });
  VectorField v(g);
  for (int a = 0; a < g.n; ++a) v[a] = spectral_derivative(phi, a, 1);
  return v;
}

} // namespace

TEST_CASE("Leray projection kills gradients and fixes divergence-free fields") {
  const Grid g = Grid::square2d(32);
  VectorField grad = gradient_field(g);
  VectorField out = leray_project(grad);
  for (int i = 0; i < 2; ++i) CHECK(out[i].max_abs() < 1e-12);

  EulerState sc = make_scenario(g, {4.0, 0.1, 3, 0.0});
  VectorField same = leray_project(sc.v);
  for (int i = 0; i < 2; ++i) CHECK((same[i].v - sc.v[i].v).abs().maxCoeff() < 1e-12);

  VectorField mixed(g);
  mixed[0] = sample_random_field(g, 2.0, 5);
  mixed[1] = sample_random_field(g, 2.0, 6);
  VectorField proj = leray_project(mixed);
  Real scale = 0.0;
  for (int i = 0; i < 2; ++i) scale += sobolev_norm(mixed[i], 0, 0);
  CHECK(spectral_divergence_norm(proj) < 1e-12 * scale);
}

TEST_CASE("Elsasser-aligned states are stationary points of the rhs") {
  const Grid g = Grid::square2d(32);
  EulerState s = make_scenario(g, {4.0, 0.1, 7, 0.0});
  s.b = s.v; // v = b cancels both equations
  VectorField dv, db;
  mhd_rhs(s, dv, db);
  for (int i = 0; i < 2; ++i) {
    CHECK(dv[i].max_abs() < 1e-13);
    CHECK(db[i].max_abs() < 1e-13);
  }
}

TEST_CASE("zero state stays zero; Elsasser steady state is preserved by RK4") {
  const Grid g = Grid::square2d(16);
  EulerState z(g);
  EulerState z1 = step_rk4(z, 1e-2);
  for (int i = 0; i < 2; ++i) {
    CHECK(z1.v[i].max_abs() == 0.0);
    CHECK(z1.b[i].max_abs() == 0.0);
  }
  EulerState s = make_scenario(g, {4.0, 0.1, 9, 0.0});
  s.b = s.v;
  EulerState s1 = step_rk4(s, 1e-3);
  for (int i = 0; i < 2; ++i) CHECK((s1.v[i].v - s.v[i].v).abs().maxCoeff() < 1e-12);
}

TEST_CASE("CFL violation is rejected with the computed bound") {
  const Grid g = Grid::square2d(16);
  EulerState s = make_scenario(g, {4.0, 0.1, 9, 0.0});
  CHECK_THROWS_AS(step_rk4(s, 1.0), NumericalError);
}

TEST_CASE("mhd_rhs matches centered differences on a refined grid") {
  // band-limited state evaluated on 32^2 and 64^2; the spectral rhs is the
  // reference, the FD evaluation converges to it at order 2
  Real errs[2];
  int lvl = 0;
  for (int N : {32, 64}) {
    const Grid g = Grid::square2d(N);
    EulerState s(g);
    for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) {
      s.v[0].v[i] = 0.1 * std::sin(x1) + 0.05 * std::cos(2.0 * x1 + x0);
      s.v[1].v[i] = 0.1 * std::sin(x0) - 0.05 * std::cos(2.0 * x0 - x1);
    });
    s.v = leray_project(s.v);
    s.b[0].v.setOnes();
    VectorField dv, db;
    mhd_rhs(s, dv, db);
    // FD of -(v.grad) b + (b.grad) v for the db equation (projection-free)
    const int NN = N;
    const Real h = g.dx(0);
    Real worst = 0.0;
    for (int i0 = 0; i0 < NN; ++i0)
      for (int i1 = 0; i1 < NN; ++i1) {
        auto at = [&](const Field& f, int a, int b) {
          return f.v[((a + NN) % NN) * NN + ((b + NN) % NN)];
        };
        for (int c = 0; c < 2; ++c) {
          Real adv = 0.0;
          adv += s.v[0].v[i0 * NN + i1] * (at(s.b[c], i0 + 1, i1) - at(s.b[c], i0 - 1, i1)) / (2 * h);
          adv += s.v[1].v[i0 * NN + i1] * (at(s.b[c], i0, i1 + 1) - at(s.b[c], i0, i1 - 1)) / (2 * h);
          Real str = 0.0;
          str += s.b[0].v[i0 * NN + i1] * (at(s.v[c], i0 + 1, i1) - at(s.v[c], i0 - 1, i1)) / (2 * h);
          str += s.b[1].v[i0 * NN + i1] * (at(s.v[c], i0, i1 + 1) - at(s.v[c], i0, i1 - 1)) / (2 * h);
          worst = std::max(worst, std::abs((str - adv) - db[c].v[i0 * NN + i1]));
        }
      }
    errs[lvl++] = worst;
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.9);
}

TEST_CASE("RK4 self-convergence order on a vortex-plus-field scenario") {
  const Grid g = Grid::square2d(32);
  EulerState s0(g);
  for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) {
    // smooth large-scale vortex data with a magnetic perturbation
    s0.v[0].v[i] = -0.2 * std::sin(x1) * std::cos(x0);
    s0.v[1].v[i] = 0.2 * std::sin(x0) * std::cos(x1);
    s0.b[0].v[i] = 1.0 - 0.1 * std::cos(2.0 * x1);
    s0.b[1].v[i] = 0.1 * std::cos(x0);
  });
  s0.v = leray_project(s0.v);
  s0.b = leray_project(s0.b);
  const Real t_end = 0.2;
  auto run = [&](Real dt) {
    EulerState s = s0;
    const int n = static_cast<int>(std::llround(t_end / dt));
    for (int m = 0; m < n; ++m) s = step_rk4(s, dt);
    return s;
  };
  EulerState ref = run(t_end / 64.0);
  auto err = [&](const EulerState& s) {
    Real acc = 0.0;
    for (int i = 0; i < 2; ++i) acc += (s.v[i].v - ref.v[i].v).square().sum();
    return std::sqrt(acc);
  };
  const Real e1 = err(run(t_end / 8.0));
  const Real e2 = err(run(t_end / 16.0));
  CHECK(std::log2(e1 / e2) > 3.8);
}

TEST_CASE("trajectories of the zero and constant fields") {
  const Grid g = Grid::square2d(16);
  std::vector<EulerState> hist(3, EulerState(g));
  for (int m = 0; m < 3; ++m) hist[static_cast<size_t>(m)].t = 0.05 * m;
  auto maps = advect_trajectories(hist, 0.05);
  for (const auto& map : maps)
    for (int i = 0; i < 2; ++i) CHECK(map.displacement[i].max_abs() < 1e-14);

  for (auto& s : hist) {
    s.v[0].v.setConstant(0.3);
    s.v[1].v.setConstant(-0.2);
  }
  maps = advect_trajectories(hist, 0.05);
  CHECK((maps[2].displacement[0].v - 0.1 * 0.3).abs().maxCoeff() < 1e-12);
  CHECK((maps[2].displacement[1].v + 0.1 * 0.2).abs().maxCoeff() < 1e-12);
  TensorField h = flow_map_deformation(maps[2]);
  CHECK((h(0, 0).v - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(h(0, 1).max_abs() < 1e-12);
}

TEST_CASE("steady shear flow matches the closed-form trajectories") {
  const Grid g = Grid::square2d(32);
  const Real t_end = 0.1, dt = 1e-3;
  const int nsteps = 100;
  std::vector<EulerState> hist(nsteps + 1, EulerState(g));
  for (int m = 0; m <= nsteps; ++m) {
    hist[static_cast<size_t>(m)].t = m * dt;
    for_each_point(g, [&](std::int64_t i, Real, Real x1, Real) {
      hist[static_cast<size_t>(m)].v[0].v[i] = std::sin(x1);
    });
  }
  auto maps = advect_trajectories(hist, dt);
  const FlowMap& last = maps.back();
  Real worst = 0.0;
  for_each_point(g, [&](std::int64_t i, Real, Real x1, Real) {
    worst = std::max(worst, std::abs(last.displacement[0].v[i] - t_end * std::sin(x1)));
  });
  CHECK(worst < 1e-8);
  TensorField h = flow_map_deformation(last);
  Real worst_h = 0.0;
  for_each_point(g, [&](std::int64_t i, Real, Real x1, Real) {
    worst_h = std::max(worst_h, std::abs(h(0, 1).v[i] - t_end * std::cos(x1)));
  });
  CHECK(worst_h < 1e-8);
}

TEST_CASE("push-forward through the identity map changes nothing") {
  const Grid g = Grid::square2d(16);
  EulerState s = make_scenario(g, {4.0, 0.1, 21, 0.05});
  FlowMap id(g);
  VectorField b_lag, v_lag;
  push_forward_fields(s, id, b_lag, v_lag);
  for (int i = 0; i < 2; ++i) {
    CHECK((b_lag[i].v - s.b[i].v).abs().maxCoeff() < 1e-11);
    CHECK((v_lag[i].v - s.v[i].v).abs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("constant magnetic field pushes forward to itself") {
  const Grid g = Grid::square2d(16);
  EulerState s(g);
  s.b[0].v.setOnes();
  s.t = 1.0;
  FlowMap map = sample_volume_preserving_map(g, 0.1, 33);
  VectorField b_lag, v_lag;
  push_forward_fields(s, map, b_lag, v_lag);
  CHECK((b_lag[0].v - 1.0).abs().maxCoeff() < 1e-11);
  CHECK(b_lag[1].max_abs() < 1e-11);
}

TEST_CASE("magnetic-line identity error decays at order 2 under combined refinement") {
  Real errs[2];
  int lvl = 0;
  for (int N : {16, 32}) {
    const Grid g = Grid::square2d(N);
    ScenarioParams p;
    p.amplitude = 0.1;
    p.seed = 13;
    p.band_limit = 5;
    EulerState s = make_scenario(g, p);
    const Real dt = (N == 16) ? 2e-3 : 1e-3;
    const int nsteps = static_cast<int>(std::llround(0.05 / dt));
    EulerRunResult run = run_euler(s, dt, nsteps);
    auto maps = advect_trajectories(run.history, dt);
    TensorField h = flow_map_deformation(maps.back());
    VectorField b_lag, v_lag;
    push_forward_fields(run.history.back(), maps.back(), b_lag, v_lag);
    Real worst = 0.0;
    for (int i = 0; i < 2; ++i)
      worst = std::max(worst, (b_lag[i].v - h(i, 0).v).abs().maxCoeff());
    errs[lvl++] = worst;
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.9);
}

TEST_CASE("scenario construction honours the requested amplitude and symmetry") {
  const Grid g = Grid::square2d(32);
  EulerState s = make_scenario(g, {4.0, 0.1, 11, 0.0});
  Real vmax = 0.0;
  for (std::int64_t q = 0; q < g.points(); ++q)
    vmax = std::max(vmax, std::sqrt(s.v[0].v[q] * s.v[0].v[q] + s.v[1].v[q] * s.v[1].v[q]));
  CHECK(vmax == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(spectral_divergence_norm(s.v) < 1e-12);
  CHECK(std::abs(s.v[0].mean()) < 1e-14);
  CHECK((s.b[0].v - 1.0).abs().maxCoeff() == 0.0);
}
