#pragma once

#include "mhdlab/types.hpp"

namespace mhdlab {

/// Smooth, even, compactly supported cutoff: identically 1 on [-inner, inner],
/// 0 outside (-outer, outer), monotone in between. chi uses (1, 2), phi (2, 4).
///
/// The transition is 1 - s(affine(x)) where s is the normalized antiderivative
/// of the bump exp(-1/(1-x^2)) on (-1, 1), evaluated by a fixed composite
/// Gauss-Legendre rule so the profile is bit-reproducible.
struct CutoffProfile {
  char name = 'x'; // 'x' = chi, 'p' = phi
  Real inner = 1.0;
  Real outer = 2.0;

  Real operator()(Real x) const;
  Real derivative(Real x) const;
};

CutoffProfile make_cutoff_chi();
CutoffProfile make_cutoff_phi();

/// Normalized bump antiderivative s(-1) = 0, s(1) = 1 (exposed for tests).
Real bump_step(Real x);

} // namespace mhdlab
