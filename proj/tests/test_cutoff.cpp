#include <doctest.h>

#include <mhdlab/cutoff.hpp>

using namespace mhdlab;

TEST_CASE("chi equals 1 on [-1,1] and vanishes outside (-2,2)") {
  const CutoffProfile chi = make_cutoff_chi();
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(1.0) == 1.0);
  CHECK(chi(-1.0) == 1.0);
  CHECK(chi(2.0) == 0.0);
  CHECK(chi(3.0) == 0.0);
  CHECK(chi(-2.5) == 0.0);
}

TEST_CASE("phi equals 1 on [-2,2] and vanishes outside (-4,4)") {
  const CutoffProfile phi = make_cutoff_phi();
  CHECK(phi(0.0) == 1.0);
  CHECK(phi(2.0) == 1.0);
  CHECK(phi(-2.0) == 1.0);
  CHECK(phi(4.0) == 0.0);
  CHECK(phi(5.0) == 0.0);
}

TEST_CASE("chi decreases monotonically across the transition band") {
  const CutoffProfile chi = make_cutoff_chi();
  Real prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const Real x = 1.0 + i / 1000.0;
    const Real v = chi(x);
    CHECK(v <= prev + 1e-12); // tail values sit at the quadrature floor
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("profiles are even") {
  const CutoffProfile chi = make_cutoff_chi();
  for (Real x : {0.3, 1.2, 1.7, 1.95}) CHECK(chi(x) == chi(-x));
}

TEST_CASE("derivative matches finite differences on the band") {
  const CutoffProfile phi = make_cutoff_phi();
  for (Real x : {2.3, 2.9, 3.5, -3.1}) {
    const Real h = 1e-6;
    const Real fd = (phi(x + h) - phi(x - h)) / (2.0 * h);
    CHECK(phi.derivative(x) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(make_cutoff_chi().derivative(0.5) == 0.0);
  CHECK(make_cutoff_chi().derivative(2.5) == 0.0);
}

TEST_CASE("evaluation is bit-reproducible") {
  const CutoffProfile chi = make_cutoff_chi();
  for (Real x : {1.1, 1.33, 1.77}) {
    const Real a = chi(x);
    const Real b = chi(x);
    CHECK(a == b);
  }
  CHECK(bump_step(0.0) == doctest::Approx(0.5).epsilon(1e-13)); // odd symmetry of the bump
}
