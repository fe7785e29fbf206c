#pragma once

#include <complex>
#include <cstdint>
#include <Eigen/Core>

namespace mhdlab {

using Real = double;
using Complex = std::complex<Real>;
using ArrayXr = Eigen::ArrayXd;
using ArrayXc = Eigen::ArrayXcd;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

/// Japanese-bracket weight <x> = 1 + |x| (the non-smooth variant, used verbatim
/// in every norm and symbol here).
inline Real jb(Real x) { return 1.0 + std::abs(x); }

} // namespace mhdlab
