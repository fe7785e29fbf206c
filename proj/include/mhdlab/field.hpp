#pragma once

#include <utility>
#include <vector>

#include "mhdlab/grid.hpp"
#include "mhdlab/types.hpp"

namespace mhdlab {

/// Real scalar samples on a Grid, row-major (axis 0 slowest).
struct Field {
  Grid grid;
  ArrayXr v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(ArrayXr::Zero(g.points())) {}
  Field(const Grid& g, ArrayXr samples) : grid(g), v(std::move(samples)) {}

  static Field zero(const Grid& g) { return Field(g); }
  static Field constant(const Grid& g, Real c) { return Field(g, ArrayXr::Constant(g.points(), c)); }

  Real mean() const { return v.mean(); }
  Real max_abs() const { return v.abs().maxCoeff(); }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw ConfigError(std::string(where) + ": grid mismatch");
}

/// Complex Fourier coefficients of a spatial field, FFT storage order,
/// continuum normalization: coef(k) approximates integral e^{+i k.x} f(x) dx.
struct Spectrum {
  Grid grid;
  ArrayXc coef;

  Spectrum() = default;
  explicit Spectrum(const Grid& g) : grid(g), coef(ArrayXc::Zero(g.points())) {}
};

/// Real/imaginary pair representing one complex-valued field (the output of
/// the exponential half-wave propagators).
struct ComplexField {
  Field re;
  Field im;
};

/// n-component vector field sharing one grid.
struct VectorField {
  Grid grid;
  std::vector<Field> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g), comp(g.n, Field(g)) {}
  int n() const { return grid.n; }
  Field& operator[](int i) { return comp[i]; }
  const Field& operator[](int i) const { return comp[i]; }
};

/// n x n matrix-valued field, components row-major: (i, a) -> i*n + a.
struct TensorField {
  Grid grid;
  std::vector<Field> comp;

  TensorField() = default;
  explicit TensorField(const Grid& g) : grid(g), comp(g.n * g.n, Field(g)) {}
  int n() const { return grid.n; }
  Field& operator()(int i, int a) { return comp[i * grid.n + a]; }
  const Field& operator()(int i, int a) const { return comp[i * grid.n + a]; }

  static TensorField identity(const Grid& g) {
    TensorField t(g);
    for (int i = 0; i < g.n; ++i) t(i, i).v.setOnes();
    return t;
  }
};

inline TensorField operator+(const TensorField& a, const TensorField& b) {
  require_same_grid(a.grid, b.grid, "tensor +");
  TensorField r(a.grid);
  for (size_t c = 0; c < a.comp.size(); ++c) r.comp[c].v = a.comp[c].v + b.comp[c].v;
  return r;
}
inline TensorField operator-(const TensorField& a, const TensorField& b) {
  require_same_grid(a.grid, b.grid, "tensor -");
  TensorField r(a.grid);
  for (size_t c = 0; c < a.comp.size(); ++c) r.comp[c].v = a.comp[c].v - b.comp[c].v;
  return r;
}
inline TensorField operator*(Real s, const TensorField& a) {
  TensorField r(a.grid);
  for (size_t c = 0; c < a.comp.size(); ++c) r.comp[c].v = s * a.comp[c].v;
  return r;
}

/// Pointwise determinant of a 2x2 or 3x3 tensor field.
inline Field det(const TensorField& h) {
  Field d(h.grid);
  if (h.n() == 2) {
    d.v = h(0, 0).v * h(1, 1).v - h(0, 1).v * h(1, 0).v;
  } else {
    d.v = h(0, 0).v * (h(1, 1).v * h(2, 2).v - h(1, 2).v * h(2, 1).v) -
          h(0, 1).v * (h(1, 0).v * h(2, 2).v - h(1, 2).v * h(2, 0).v) +
          h(0, 2).v * (h(1, 0).v * h(2, 1).v - h(1, 1).v * h(2, 0).v);
  }
  return d;
}

} // namespace mhdlab
