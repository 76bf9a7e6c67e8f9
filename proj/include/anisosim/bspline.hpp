#pragma once

#include <Eigen/Dense>

#include "anisosim/volume.hpp"

namespace anisosim {

/// Direct cubic B-spline coefficients of a sampled line, mirror
/// (whole-sample symmetric) boundary. Evaluating the spline at integer
/// positions reproduces the original samples.
struct SplineLine {
  Eigen::ArrayXd coeffs;
};

/// Mirror fold of an arbitrary index into [0, n-1] with period 2(n-1).
inline int mirror_index(std::int64_t i, int n) {
  if (n == 1) return 0;
  const std::int64_t per = 2 * std::int64_t(n - 1);
  i = i % per;
  if (i < 0) i += per;
  return int(i >= n ? per - i : i);
}

/// In-place causal/anticausal recursive prefilter, pole sqrt(3)-2, gain 6;
/// the causal initialization sum is truncated where |pole|^k < 1e-12.
SplineLine prefilter(const Eigen::ArrayXd& samples);

/// Cubic B-spline value at position x (in samples); positions outside
/// [0, n-1] follow the mirror extension.
double eval(const SplineLine& line, double x);

/// prefilter + eval at each position.
Eigen::ArrayXd resample_line(const Eigen::ArrayXd& samples, const Eigen::ArrayXd& positions);

/// Applies resample_line along one axis of a canonical volume. Positions are
/// in source-sample units and must be uniformly spaced; spacing and origin
/// along the axis are updated from the position mapping.
Volume3 resample_volume(const Volume3& vol, int axis, const Eigen::ArrayXd& positions);

}  // namespace anisosim
