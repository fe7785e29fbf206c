#include "mhdlab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace mhdlab {

namespace {

// FFTW's planner is not thread-safe; plan creation is serialized globally.
// Executed plans live in a thread-local cache keyed by shape, each with its
// own aligned buffer, so concurrent transforms never share state.
std::mutex g_planner_mutex;

struct PlanEntry {
  fftw_plan fwd = nullptr; // e^{+i k.x}: FFTW_BACKWARD
  fftw_plan bwd = nullptr; // e^{-i k.x}: FFTW_FORWARD
  fftw_complex* buf = nullptr;
  std::int64_t size = 0;

  ~PlanEntry() {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
};

PlanEntry& plan_for(const std::vector<int>& dims) {
  thread_local std::map<std::vector<int>, PlanEntry> cache;
  auto it = cache.find(dims);
  if (it != cache.end()) return it->second;

  PlanEntry& e = cache[dims];
  e.size = 1;
  for (int d : dims) e.size *= d;
  e.buf = fftw_alloc_complex(static_cast<size_t>(e.size));
  {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    // FFTW_ESTIMATE keeps plan selection deterministic run to run.
    e.fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), e.buf, e.buf,
                          FFTW_BACKWARD, FFTW_ESTIMATE);
    e.bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), e.buf, e.buf,
                          FFTW_FORWARD, FFTW_ESTIMATE);
  }
  return e;
}

std::vector<int> spatial_dims(const Grid& g) {
  std::vector<int> dims(g.n);
  for (int a = 0; a < g.n; ++a) dims[a] = g.sizes[a];
  return dims;
}

} // namespace

void dft_nd(const std::vector<int>& dims, const ArrayXc& in, ArrayXc& out, bool forward) {
  PlanEntry& e = plan_for(dims);
  // std::complex<double> and fftw_complex are layout-compatible
  std::memcpy(static_cast<void*>(e.buf), static_cast<const void*>(in.data()),
              sizeof(Complex) * static_cast<size_t>(e.size));
  fftw_execute(forward ? e.fwd : e.bwd);
  out.resize(e.size);
  std::memcpy(static_cast<void*>(out.data()), static_cast<const void*>(e.buf),
              sizeof(Complex) * static_cast<size_t>(e.size));
}

Spectrum to_spectrum(const Field& f) {
  Spectrum s(f.grid);
  ArrayXc tmp = f.v.cast<Complex>();
  dft_nd(spatial_dims(f.grid), tmp, s.coef, true);
  s.coef *= f.grid.dvol();
  return s;
}

Spectrum to_spectrum_complex(const ComplexField& f) {
  require_same_grid(f.re.grid, f.im.grid, "to_spectrum_complex");
  Spectrum s(f.re.grid);
  ArrayXc tmp(f.re.v.size());
  tmp.real() = f.re.v;
  tmp.imag() = f.im.v;
  dft_nd(spatial_dims(f.re.grid), tmp, s.coef, true);
  s.coef *= f.re.grid.dvol();
  return s;
}

Field to_field(const Spectrum& s) {
  ArrayXc out;
  dft_nd(spatial_dims(s.grid), s.coef, out, false);
  const Real scale = 1.0 / (s.grid.dvol() * static_cast<Real>(s.grid.points()));
  Field f(s.grid);
  f.v = out.real() * scale;
  // A large imaginary remainder means a symmetry-breaking multiplier slipped in.
  const Real imag_max = out.imag().abs().maxCoeff() * scale;
  const Real real_max = f.v.abs().maxCoeff();
  if (imag_max > 1e-8 * (real_max + 1.0))
    throw NumericalError("to_field: inverse transform is not real (conjugate symmetry broken)");
  return f;
}

ComplexField to_field_complex(const Spectrum& s) {
  ArrayXc out;
  dft_nd(spatial_dims(s.grid), s.coef, out, false);
  const Real scale = 1.0 / (s.grid.dvol() * static_cast<Real>(s.grid.points()));
  ComplexField f{Field(s.grid), Field(s.grid)};
  f.re.v = out.real() * scale;
  f.im.v = out.imag() * scale;
  return f;
}

Real spectrum_l2(const Spectrum& s) {
  const Real dxi_n = std::pow(s.grid.dxi(), s.grid.n);
  const Real norm2 = (s.coef.abs2().sum()) * dxi_n / std::pow(kTwoPi, s.grid.n);
  return std::sqrt(norm2);
}

} // namespace mhdlab
