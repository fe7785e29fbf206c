#include "mhdlab/cutoff.hpp"

#include <array>
#include <cmath>

namespace mhdlab {

namespace {

Real bump(Real x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGl = 16;
constexpr Real kGlX[kGl] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr Real kGlW[kGl] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

Real gl_segment(Real a, Real b) {
  const Real mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Real acc = 0.0;
  for (int q = 0; q < kGl; ++q) acc += kGlW[q] * bump(mid + half * kGlX[q]);
  return acc * half;
}

// Fixed partition of [-1, 1]; the cumulative table keeps queries on a shared
// quadrature so the profile is bit-reproducible and monotone to roundoff.
constexpr int kPanels = 64;

struct CumulativeTable {
  std::array<Real, kPanels + 1> node{};
  std::array<Real, kPanels + 1> cum{};
  Real total = 0.0;
  CumulativeTable() {
    node[0] = -1.0;
    cum[0] = 0.0;
    for (int p = 1; p <= kPanels; ++p) {
      node[p] = -1.0 + 2.0 * p / kPanels;
      cum[p] = cum[p - 1] + gl_segment(node[p - 1], node[p]);
    }
    total = cum[kPanels];
  }
};

const CumulativeTable& table() {
  static const CumulativeTable t;
  return t;
}

} // namespace

Real bump_step(Real x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const CumulativeTable& t = table();
  int p = static_cast<int>((x + 1.0) * (kPanels / 2.0));
  p = std::min(std::max(p, 0), kPanels - 1);
  return (t.cum[p] + gl_segment(t.node[p], x)) / t.total;
}

Real CutoffProfile::operator()(Real x) const {
  const Real ax = std::abs(x);
  if (ax <= inner) return 1.0;
  if (ax >= outer) return 0.0;
  // Affine map of the transition band onto [-1, 1].
  const Real u = (2.0 * ax - (inner + outer)) / (outer - inner);
  return 1.0 - bump_step(u);
}

Real CutoffProfile::derivative(Real x) const {
  const Real ax = std::abs(x);
  if (ax <= inner || ax >= outer) return 0.0;
  const Real slope = 2.0 / (outer - inner);
  const Real u = (2.0 * ax - (inner + outer)) / (outer - inner);
  Real d = -bump(u) / table().total * slope;
  return (x < 0.0) ? -d : d;
}

CutoffProfile make_cutoff_chi() { return CutoffProfile{'x', 1.0, 2.0}; }
CutoffProfile make_cutoff_phi() { return CutoffProfile{'p', 2.0, 4.0}; }

} // namespace mhdlab
