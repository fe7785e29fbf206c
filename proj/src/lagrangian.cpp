#include "mhdlab/lagrangian.hpp"


#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace mhdlab {

TensorField adjugate(const TensorField& h) {
  const int n = h.n();
  TensorField r(h.grid);
  if (n == 2) {
    r(0, 0).v = h(1, 1).v;
    r(0, 1).v = -h(0, 1).v;
    r(1, 0).v = -h(1, 0).v;
    r(1, 1).v = h(0, 0).v;
  } else {
    // adj(H)^{ab} = cofactor of H^{ba}: one epsilon-epsilon contraction each.
    auto minor2 = [&](int i, int j, int k, int l) { return h(i, j).v * h(k, l).v; };
    r(0, 0).v = minor2(1, 1, 2, 2) - minor2(1, 2, 2, 1);
    r(0, 1).v = minor2(0, 2, 2, 1) - minor2(0, 1, 2, 2);
    r(0, 2).v = minor2(0, 1, 1, 2) - minor2(0, 2, 1, 1);
    r(1, 0).v = minor2(1, 2, 2, 0) - minor2(1, 0, 2, 2);
    r(1, 1).v = minor2(0, 0, 2, 2) - minor2(0, 2, 2, 0);
    r(1, 2).v = minor2(0, 2, 1, 0) - minor2(0, 0, 1, 2);
    r(2, 0).v = minor2(1, 0, 2, 1) - minor2(1, 1, 2, 0);
    r(2, 1).v = minor2(0, 1, 2, 0) - minor2(0, 0, 2, 1);
    r(2, 2).v = minor2(0, 0, 1, 1) - minor2(0, 1, 1, 0);
  }
  return r;
}

TensorField cofactor_inverse(const TensorField& h, Real det_tol) {
  const Field d = det(h);
  const Real dev = (d.v - 1.0).abs().maxCoeff();
  if (dev > det_tol) {
    std::ostringstream msg;
    msg << "cofactor_inverse: max |det H - 1| = " << dev << " exceeds tolerance " << det_tol;
    throw NumericalError(msg.str());
  }
  return adjugate(h);
}

Field null_form_q0(const Field& f, const Field& ft, const Field& g, const Field& gt) {
  require_same_grid(f.grid, g.grid, "null_form_q0");
  require_same_grid(f.grid, ft.grid, "null_form_q0");
  require_same_grid(g.grid, gt.grid, "null_form_q0");
  const Field f1 = spectral_derivative(f, 0, 1);
  const Field g1 = spectral_derivative(g, 0, 1);
  Field out(f.grid);
  out.v = ft.v * gt.v - f1.v * g1.v;
  return out;
}

Field pressure_rhs(const DeformationState& state, Real* removed_mean, Real det_tol) {
  const int n = state.grid.n;
  const TensorField k = cofactor_inverse(state.H, det_tol);
  // d1 H, all components at once.
  TensorField h1(state.grid);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) h1(i, a) = spectral_derivative(state.H(i, a), 0, 1);

  // Divergence of the momentum equation fixes the sign: the flat limit is
  // tr((grad b)^2) - tr((grad v)^2), and the unimodular constraint drifts
  // quadratically in the data with the sign reversed.
  Field rhs(state.grid);
  for (int kk = 0; kk < n; ++kk)
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
          rhs.v += k(kk, i).v * k(m, j).v *
                   (h1(j, kk).v * h1(i, m).v - state.Ht(j, kk).v * state.Ht(i, m).v);
  // Aliased Nyquist content of the products is invisible to the first
  // derivatives the solve and the forcing are built from; drop it here.
  Spectrum rs = to_spectrum(rhs);
  zero_nyquist_inplace(rs);
  rhs = to_field(rs);
  return subtract_mean(rhs, removed_mean);
}

namespace {

// Pointwise symmetric matrix A = K K^T and its smallest eigenvalue over the grid.
struct EllipticOperator {
  Grid grid;
  std::vector<ArrayXr> a; // packed upper triangle: 2D {a00,a01,a11}, 3D adds a02,a12,a22
  Real min_eig = 0.0;

  explicit EllipticOperator(const TensorField& kinv) : grid(kinv.grid) {
    const int n = grid.n;
    auto entry = [&](int p, int q) {
      ArrayXr s = ArrayXr::Zero(grid.points());
      for (int i = 0; i < n; ++i) s += kinv(p, i).v * kinv(q, i).v;
      return s;
    };
    if (n == 2) {
      a = {entry(0, 0), entry(0, 1), entry(1, 1)};
      const ArrayXr tr = a[0] + a[2];
      const ArrayXr dd = a[0] * a[2] - a[1] * a[1];
      min_eig = (0.5 * (tr - (tr * tr - 4.0 * dd).max(0.0).sqrt())).minCoeff();
    } else {
      a = {entry(0, 0), entry(0, 1), entry(1, 1), entry(0, 2), entry(1, 2), entry(2, 2)};
      min_eig = 1e300;
      for (std::int64_t p = 0; p < grid.points(); ++p) {
        Eigen::Matrix3d m;
        m << a[0][p], a[1][p], a[3][p], a[1][p], a[2][p], a[4][p], a[3][p], a[4][p], a[5][p];
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues()[0]);
      }
    }
  }

  const ArrayXr& entry(int p, int q) const {
    const int i = std::min(p, q), j = std::max(p, q);
    if (grid.n == 2) return a[i + j];          // (0,0)->0, (0,1)->1, (1,1)->2
    static const int map3[3][3] = {{0, 1, 3}, {1, 2, 4}, {3, 4, 5}};
    return a[map3[i][j]];
  }

  // -P div(A grad q) with P the projection off the DC and Nyquist planes, so
  // the operator is symmetric positive definite on the solvable subspace.
  ArrayXr apply(const ArrayXr& q) const {
    const int n = grid.n;
    Field qf(grid, q);
    Spectrum qs = to_spectrum(qf);
    std::vector<Field> dq(n, Field(grid));
    for (int b = 0; b < n; ++b) {
      Spectrum t = qs;
      spectral_derivative_inplace(t, b, 1);
      dq[b] = to_field(t);
    }
    Spectrum div(grid);
    for (int p = 0; p < n; ++p) {
      ArrayXr w = ArrayXr::Zero(grid.points());
      for (int b = 0; b < n; ++b) w += entry(p, b) * dq[b].v;
      Spectrum ws = to_spectrum(Field(grid, std::move(w)));
      spectral_derivative_inplace(ws, p, 1);
      div.coef -= ws.coef;
    }
    zero_nyquist_inplace(div);
    div.coef[0] = Complex(0.0, 0.0);
    return to_field(div).v;
  }

  // Flat inverse Laplacian, spectral, mean-zero and Nyquist-free.
  ArrayXr precondition(const ArrayXr& r) const {
    Field rf(grid, r);
    Spectrum s = to_spectrum(rf);
    zero_nyquist_inplace(s);
    const Real k0 = grid.dxi();
    for_each_mode(grid, [&](std::int64_t idx, int ka, int kb, int kc) {
      const Real k2 = k0 * k0 * (Real(ka) * ka + Real(kb) * kb + Real(kc) * kc);
      s.coef[idx] = (k2 == 0.0) ? Complex(0.0, 0.0) : s.coef[idx] / k2;
    });
    return to_field(s).v;
  }
};

} // namespace

Field solve_pressure(const TensorField& h, const Field& rhs, Real tol, PressureSolveInfo* info,
                     int max_iters, Real det_tol) {
  require_same_grid(h.grid, rhs.grid, "solve_pressure");
  const Real rhs_scale = std::sqrt(rhs.v.square().mean());
  if (std::abs(rhs.mean()) > 1e-12 * (rhs_scale + 1.0))
    throw NumericalError("solve_pressure: rhs is not mean-zero (torus solvability)");

  const TensorField kinv = cofactor_inverse(h, det_tol);
  EllipticOperator op(kinv);
  if (op.min_eig <= 0.1)
    throw NumericalError("solve_pressure: coefficient matrix not uniformly elliptic (min eig " +
                         std::to_string(op.min_eig) + ")");

  // PCG on -div(A grad q) = -rhs over the mean-zero, Nyquist-free subspace
  // (the operator annihilates Nyquist planes, so they are outside its range).
  Spectrum bs = to_spectrum(rhs);
  zero_nyquist_inplace(bs);
  const ArrayXr b = -to_field(bs).v;
  const Real bnorm = std::sqrt(b.square().sum());
  Field q(h.grid);
  if (bnorm == 0.0) {
    if (info) *info = {0, 0.0, op.min_eig};
    return q;
  }
  ArrayXr x = ArrayXr::Zero(h.grid.points());
  ArrayXr r = b;
  ArrayXr z = op.precondition(r);
  ArrayXr p = z;
  Real rz = (r * z).sum();
  int it = 0;
  for (; it < max_iters; ++it) {
    if (std::sqrt(r.square().sum()) <= tol * bnorm) break;
    const ArrayXr ap = op.apply(p);
    const Real alpha = rz / (p * ap).sum();
    x += alpha * p;
    r -= alpha * ap;
    z = op.precondition(r);
    const Real rz_new = (r * z).sum();
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  x -= x.mean();

  // Residual contract, verified against a direct application.
  const ArrayXr res = op.apply(x) - b;
  const Real rel = std::sqrt(res.square().sum()) / bnorm;
  if (info) *info = {it, rel, op.min_eig};
  if (rel > tol) {
    std::ostringstream msg;
    msg << "solve_pressure: no convergence within " << max_iters << " iterations (residual " << rel
        << ", tol " << tol << ")";
    throw NumericalError(msg.str());
  }
  q.v = x;
  return q;
}

VectorField euler_pressure_gradient(const TensorField& h, const Field& q, Real det_tol) {
  require_same_grid(h.grid, q.grid, "wave_forcing");
  const int n = h.grid.n;
  const TensorField kinv = cofactor_inverse(h, det_tol);
  std::vector<Field> dq(n, Field(h.grid));
  Spectrum qs = to_spectrum(q);
  for (int b = 0; b < n; ++b) {
    Spectrum t = qs;
    spectral_derivative_inplace(t, b, 1);
    dq[b] = to_field(t);
  }
  VectorField grad(h.grid);
  for (int i = 0; i < n; ++i) {
    for (int b = 0; b < n; ++b) grad[i].v += kinv(b, i).v * dq[b].v;
  }
  return grad;
}

TensorField wave_forcing(const TensorField& h, const Field& q, Real det_tol) {
  const int n = h.grid.n;
  VectorField grad = euler_pressure_gradient(h, q, det_tol);
  TensorField f(h.grid);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) f(i, a).v = -spectral_derivative(grad[i], a, 1).v;
  return f;
}

Real curl_compatibility_residual(const TensorField& h) {
  const int n = h.n();
  Real worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const Field dba = spectral_derivative(h(i, a), b, 1);
        const Field dab = spectral_derivative(h(i, b), a, 1);
        worst = std::max(worst, (dba.v - dab.v).abs().maxCoeff());
      }
  return worst;
}

} // namespace mhdlab
