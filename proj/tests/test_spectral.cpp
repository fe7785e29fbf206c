#include <doctest.h>

#include <mhdlab/norms.hpp>
#include <mhdlab/spectral.hpp>

using namespace mhdlab;

namespace {

// fixed band-limited function, representable on every grid used below
Real probe(Real x0, Real x1) {
  return std::sin(x0) + 0.7 * std::cos(2.0 * x0 + 3.0 * x1) - 0.4 * std::sin(x0 - 2.0 * x1);
}
Real probe_d0(Real x0, Real x1) {
  return std::cos(x0) - 1.4 * std::sin(2.0 * x0 + 3.0 * x1) - 0.4 * std::cos(x0 - 2.0 * x1);
}

Field sample2d(const Grid& g, Real (*fn)(Real, Real)) {
  Field f(g);
  for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) { f.v[i] = fn(x0, x1); });
  return f;
}

Field single_mode(const Grid& g, int k0, int k1) {
  Field f(g);
  for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) { f.v[i] = std::cos(k0 * x0 + k1 * x1); });
  return f;
}

} // namespace

TEST_CASE("spectral derivative of sin(y1) is cos(y1)") {
  const Grid g = Grid::square2d(16);
  Field f(g);
  for_each_point(g, [&](std::int64_t i, Real x0, Real, Real) { f.v[i] = std::sin(x0); });
  Field d = spectral_derivative(f, 0, 1);
  Real worst = 0.0;
  for_each_point(g, [&](std::int64_t i, Real x0, Real, Real) {
    worst = std::max(worst, std::abs(d.v[i] - std::cos(x0)));
  });
  CHECK(worst < 1e-12);
}

TEST_CASE("derivatives of constants vanish") {
  const Grid g = Grid::square2d(8);
  Field f = Field::constant(g, 3.25);
  for (int axis : {0, 1})
    for (int order : {1, 2, 3}) CHECK(spectral_derivative(f, axis, order).max_abs() < 1e-13);
}

TEST_CASE("spectral derivative against centered differences at rate 2") {
  Real err[2];
  for (int lvl = 0; lvl < 2; ++lvl) {
    const int N = lvl == 0 ? 32 : 64;
    const Grid g = Grid::square2d(N);
    Field f = sample2d(g, probe);
    Field d = spectral_derivative(f, 0, 1);
    // centered differences along axis 0
    Real worst = 0.0;
    const Real h = g.dx(0);
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1) {
        const int ip = (i0 + 1) % N, im = (i0 + N - 1) % N;
        const Real fd = (f.v[ip * N + i1] - f.v[im * N + i1]) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - d.v[i0 * N + i1]));
      }
    err[lvl] = worst;
  }
  const Real rate = std::log2(err[0] / err[1]);
  CHECK(rate > 1.9);
  CHECK(rate < 2.1);
}

TEST_CASE("spectral derivative exactness against the analytic derivative") {
  const Grid g = Grid::square2d(32);
  Field d = spectral_derivative(sample2d(g, probe), 0, 1);
  Field ref = sample2d(g, probe_d0);
  CHECK((d.v - ref.v).abs().maxCoeff() < 1e-12);
}

TEST_CASE("axis out of range is rejected") {
  const Grid g = Grid::square2d(8);
  CHECK_THROWS_AS(spectral_derivative(Field(g), 2, 1), ConfigError);
}

TEST_CASE("Lambda symbol scales a single mode by <xi>") {
  const Grid g = Grid::square2d(16);
  Field f = single_mode(g, 3, 0);
  Field out = apply_symbol(f, SymbolSpec::lambda(1.0));
  CHECK((out.v - 4.0 * f.v).abs().maxCoeff() < 1e-12); // <xi> = 1 + 3
}

TEST_CASE("Lambda^0 is the identity") {
  const Grid g = Grid::square2d(16);
  Field f = sample2d(g, probe);
  Field out = apply_symbol(f, SymbolSpec::lambda(0.0));
  CHECK((out.v - f.v).abs().maxCoeff() < 1e-13);
}

TEST_CASE("Lambda^a then Lambda^-a round trips") {
  const Grid g = Grid::square2d(32);
  Field f = sample2d(g, probe);
  Field out = apply_symbol(apply_symbol(f, SymbolSpec::lambda(1.3)), SymbolSpec::lambda(-1.3));
  const Real rel = std::sqrt((out.v - f.v).square().sum() / f.v.square().sum());
  CHECK(rel < 1e-12);
}

TEST_CASE("D with negative exponent rejects xi_1 = 0 content") {
  const Grid g = Grid::square2d(16);
  Field f = single_mode(g, 0, 2); // lives on the xi_1 = 0 plane
  CHECK_THROWS_AS(apply_symbol(f, SymbolSpec::d(-1.0)), NumericalError);
  Field ok = single_mode(g, 1, 2);
  Field out = apply_symbol(ok, SymbolSpec::d(-1.0));
  CHECK((out.v - ok.v).abs().maxCoeff() < 1e-12); // |xi_1| = 1
}

TEST_CASE("LambdaMinus is rejected on spatial fields") {
  const Grid g = Grid::square2d(8);
  CHECK_THROWS_AS(apply_symbol(Field(g), SymbolSpec::lambda_minus(0.5)), ConfigError);
}

TEST_CASE("sinc propagator degenerates to t on fields constant along y1") {
  const Grid g = Grid::square2d(16);
  Field f = single_mode(g, 0, 3);
  Field out = half_wave_propagate(f, 0.37, WaveMode::sinc);
  CHECK((out.v - 0.37 * f.v).abs().maxCoeff() < 1e-13);
  // and cos(tD) fixes them
  Field fixed = half_wave_propagate(f, 0.37, WaveMode::cos);
  CHECK((fixed.v - f.v).abs().maxCoeff() < 1e-13);
}

TEST_CASE("exp_plus multiplies the xi_1 = 1 mode by i at t = pi/2") {
  const Grid g = Grid::square2d(16);
  Field f = single_mode(g, 1, 0); // cos(y1)
  ComplexField out = half_wave_propagate_exp(f, kPi / 2.0, true);
  // e^{i pi/2 |xi_1|} cos = i cos: real part 0, imaginary part cos(y1)
  CHECK(out.re.max_abs() < 1e-12);
  CHECK((out.im.v - f.v).abs().maxCoeff() < 1e-12);
}

TEST_CASE("exponential propagators satisfy the group property") {
  const Grid g = Grid::square2d(32);
  Field f = sample2d(g, probe);
  const Real t = 0.31, s = 0.47;
  ComplexField two = half_wave_propagate_exp(half_wave_propagate_exp(f, t, true), s, true);
  ComplexField one = half_wave_propagate_exp(f, t + s, true);
  CHECK((two.re.v - one.re.v).abs().maxCoeff() < 1e-12);
  CHECK((two.im.v - one.im.v).abs().maxCoeff() < 1e-12);
}

TEST_CASE("free-wave energy is conserved by the homogeneous propagators") {
  const Grid g = Grid::square2d(32);
  Field f = sample2d(g, probe);
  Field gdat(g);
  for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) {
    gdat.v[i] = 0.3 * std::cos(2.0 * x0) - 0.1 * std::sin(x0 + x1);
  });
  auto energy = [&](Real t) {
    // u(t) = cos(tD) f + D^{-1} sin(tD) g
    Spectrum fs = to_spectrum(f), gs = to_spectrum(gdat);
    Spectrum u = fs, du = fs;
    Spectrum u2 = gs, du2 = gs;
    propagate_spectrum(u, t, WaveMode::cos);
    propagate_spectrum(u2, t, WaveMode::sinc);
    propagate_spectrum(du, t, WaveMode::dcos);
    propagate_spectrum(du2, t, WaveMode::cos);
    u.coef += u2.coef;
    du.coef += du2.coef;
    Field ut = to_field(du);
    Field u1 = to_field(u);
    Field dy = spectral_derivative(u1, 0, 1);
    return 0.5 * (ut.v.square().sum() + dy.v.square().sum()) * g.dvol();
  };
  const Real e0 = energy(0.0);
  for (Real t : {0.2, 0.7, 1.9}) CHECK(std::abs(energy(t) - e0) < 1e-10 * e0);
}

TEST_CASE("dealiasing removes the top third of the spectrum") {
  const Grid g = Grid::square2d(16);
  Field f = single_mode(g, 6, 0); // 6 > 16/3
  Spectrum s = to_spectrum(f);
  dealias_inplace(s);
  CHECK(to_field(s).max_abs() < 1e-13);
  Field keep = single_mode(g, 5, 2);
  Spectrum ks = to_spectrum(keep);
  dealias_inplace(ks);
  CHECK((to_field(ks).v - keep.v).abs().maxCoeff() < 1e-13);
}
