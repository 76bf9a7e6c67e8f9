#include "anisosim/bspline.hpp"

#include <cmath>
#include <stdexcept>

namespace anisosim {

namespace {

constexpr double kPole = -0.26794919243112270647;  // sqrt(3) - 2
constexpr double kTolerance = 1e-12;

double initial_causal(const Eigen::ArrayXd& c) {
  const auto n = c.size();
  const int horizon = int(std::ceil(std::log(kTolerance) / std::log(std::abs(kPole))));
  if (horizon < n) {
    double zn = kPole;
    double sum = c[0];
    for (int k = 1; k < horizon; ++k) {
      sum += zn * c[k];
      zn *= kPole;
    }
    return sum;
  }
  // short line: exact mirror initialization
  double zn = kPole;
  const double iz = 1.0 / kPole;
  double z2n = std::pow(kPole, double(n - 1));
  double sum = c[0] + z2n * c[n - 1];
  z2n *= z2n * iz;
  for (Eigen::Index k = 1; k <= n - 2; ++k) {
    sum += (zn + z2n) * c[k];
    zn *= kPole;
    z2n *= iz;
  }
  return sum / (1.0 - zn * zn);
}

}  // namespace

SplineLine prefilter(const Eigen::ArrayXd& samples) {
  const auto n = samples.size();
  if (n < 2) throw std::invalid_argument("prefilter needs at least 2 samples");
  if (!samples.isFinite().all()) throw std::invalid_argument("prefilter input must be finite");

  SplineLine line;
  line.coeffs = samples * 6.0;  // gain (1 - z)(1 - 1/z) = 6 for the cubic pole
  auto& c = line.coeffs;
  c[0] = initial_causal(c);
  for (Eigen::Index k = 1; k < n; ++k) c[k] += kPole * c[k - 1];
  c[n - 1] = (kPole / (kPole * kPole - 1.0)) * (kPole * c[n - 2] + c[n - 1]);
  for (Eigen::Index k = n - 2; k >= 0; --k) c[k] = kPole * (c[k + 1] - c[k]);
  return line;
}

double eval(const SplineLine& line, double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("eval position must be finite");
  const int n = int(line.coeffs.size());
  if (n == 1) return line.coeffs[0];

  // mirror fold into [0, n-1]
  const double per = 2.0 * (n - 1);
  x = std::fmod(x, per);
  if (x < 0) x += per;
  if (x > n - 1) x = per - x;

  int i = int(std::floor(x));
  if (i > n - 2) i = n - 2;
  const double f = x - i;

  const double f2 = f * f;
  const double f3 = f2 * f;
  const double w0 = (1.0 - 3.0 * f + 3.0 * f2 - f3) / 6.0;
  const double w1 = (4.0 - 6.0 * f2 + 3.0 * f3) / 6.0;
  const double w2 = (1.0 + 3.0 * f + 3.0 * f2 - 3.0 * f3) / 6.0;
  const double w3 = f3 / 6.0;

  const auto& c = line.coeffs;
  return w0 * c[mirror_index(i - 1, n)] + w1 * c[mirror_index(i, n)] +
         w2 * c[mirror_index(i + 1, n)] + w3 * c[mirror_index(i + 2, n)];
}

Eigen::ArrayXd resample_line(const Eigen::ArrayXd& samples, const Eigen::ArrayXd& positions) {
  const SplineLine line = prefilter(samples);
  Eigen::ArrayXd out(positions.size());
  for (Eigen::Index k = 0; k < positions.size(); ++k) out[k] = eval(line, positions[k]);
  return out;
}

Volume3 resample_volume(const Volume3& vol, int axis, const Eigen::ArrayXd& positions) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  if (!vol.is_canonical()) throw std::invalid_argument("resample_volume expects a canonical volume");
  if (positions.size() == 0) throw std::invalid_argument("positions must be non-empty");

  double step = 1.0;
  if (positions.size() >= 2) {
    step = positions[1] - positions[0];
    for (Eigen::Index k = 1; k + 1 < positions.size(); ++k)
      if (std::abs((positions[k + 1] - positions[k]) - step) > 1e-9 * std::max(1.0, std::abs(step)))
        throw std::invalid_argument("resample_volume positions must be uniformly spaced");
  }

  const int nsrc = vol.dims[axis];
  const int nout = int(positions.size());

  Volume3 out;
  out.dims = vol.dims;
  out.dims[axis] = nout;
  out.spacing = vol.spacing;
  out.spacing[axis] = std::abs(step) * vol.spacing[axis];
  out.origin = vol.origin;
  out.origin[axis] += positions[0] * vol.spacing[axis];
  out.orientation = vol.orientation;
  out.data.resize(out.size());

  // iterate every line along `axis`
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  const std::int64_t stride_axis = vol.index(axis == 0, axis == 1, axis == 2);
  const std::int64_t out_stride_axis = out.index(axis == 0, axis == 1, axis == 2);
  const std::int64_t stride_a1 = vol.index(a1 == 0, a1 == 1, a1 == 2);
  const std::int64_t stride_a2 = vol.index(a2 == 0, a2 == 1, a2 == 2);
  const std::int64_t out_stride_a1 = out.index(a1 == 0, a1 == 1, a1 == 2);
  const std::int64_t out_stride_a2 = out.index(a2 == 0, a2 == 1, a2 == 2);

  Eigen::ArrayXd buf(nsrc);
  for (int j = 0; j < vol.dims[a2]; ++j)
    for (int i = 0; i < vol.dims[a1]; ++i) {
      const std::int64_t base = i * stride_a1 + j * stride_a2;
      for (int k = 0; k < nsrc; ++k) buf[k] = vol.data[base + k * stride_axis];
      const SplineLine line = prefilter(buf);
      const std::int64_t obase = i * out_stride_a1 + j * out_stride_a2;
      for (int k = 0; k < nout; ++k)
        out.data[obase + k * out_stride_axis] = float(eval(line, positions[k]));
    }
  return out;
}

}  // namespace anisosim
