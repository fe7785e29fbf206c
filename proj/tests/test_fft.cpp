#include <doctest.h>

#include <mhdlab/fft.hpp>

using namespace mhdlab;

namespace {

Field wavy(const Grid& g) {
  Field f(g);
  for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real x2) {
    f.v[i] = std::sin(x0) + 0.5 * std::cos(2.0 * x0 + x1) + 0.25 * std::sin(3.0 * x1 + x2);
  });
  return f;
}

} // namespace

TEST_CASE("transform round trip stays below 1e-12") {
  for (const Grid& g : {Grid::square2d(16), Grid::square2d(256), Grid::cube3d(8), Grid::cube3d(64)}) {
    Field f = wavy(g);
    Field back = to_field(to_spectrum(f));
    const Real rel = std::sqrt((back.v - f.v).square().sum() / f.v.square().sum());
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("forward transform matches a naive DFT") {
  const Grid g = Grid::square2d(8);
  Field f = wavy(g);
  Spectrum s = to_spectrum(f);
  // direct sum for a handful of modes
  for (int ka : {0, 1, -2, 4}) {
    for (int kb : {0, -1, 3}) {
      Complex direct(0.0, 0.0);
      for_each_point(g, [&](std::int64_t i, Real x0, Real x1, Real) {
        direct += f.v[i] * std::exp(Complex(0.0, ka * x0 + kb * x1));
      });
      direct *= g.dvol();
      const std::int64_t idx = index_of_freq(ka, 8) * 8 + index_of_freq(kb, 8);
      CHECK(std::abs(s.coef[idx] - direct) < 1e-12 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("Plancherel identity for the spectrum L2") {
  const Grid g = Grid::square2d(32);
  Field f = wavy(g);
  const Real direct = std::sqrt(f.v.square().sum() * g.dvol());
  CHECK(spectrum_l2(to_spectrum(f)) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("complex pair transform round trip") {
  const Grid g = Grid::square2d(16);
  ComplexField f{wavy(g), Field(g)};
  f.im.v = 0.25 * wavy(g).v.reverse();
  ComplexField back = to_field_complex(to_spectrum_complex(f));
  CHECK((back.re.v - f.re.v).abs().maxCoeff() < 1e-12);
  CHECK((back.im.v - f.im.v).abs().maxCoeff() < 1e-12);
}
