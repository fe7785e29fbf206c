#pragma once

#include <vector>

#include "mhdlab/field.hpp"

namespace mhdlab {

/// Raw n-dimensional complex DFT with the e^{+i k.x} forward convention and
/// no normalization; dims row-major, slowest first. Plans are cached per
/// thread so the transforms are safely callable from concurrent tasks.
void dft_nd(const std::vector<int>& dims, const ArrayXc& in, ArrayXc& out, bool forward);

/// Forward transform of a real field onto the full complex mode set, with
/// continuum normalization (sum * dvol).
Spectrum to_spectrum(const Field& f);
Spectrum to_spectrum_complex(const ComplexField& f);

/// Inverse transform; checks the result is real to roundoff (the caller is
/// expected to have applied only conjugate-symmetry-preserving multipliers).
Field to_field(const Spectrum& s);
ComplexField to_field_complex(const Spectrum& s);

/// L2 norm of the coefficient array under the discrete Plancherel weights:
/// matches the physical-space L2 norm of the field.
Real spectrum_l2(const Spectrum& s);

} // namespace mhdlab
