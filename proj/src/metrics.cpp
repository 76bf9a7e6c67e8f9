#include "anisosim/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "anisosim/bspline.hpp"

namespace anisosim {

namespace {

void require_same_grid(const Volume3& a, const Volume3& b, const char* what) {
  if (a.dims != b.dims) throw std::invalid_argument(std::string(what) + ": volume dims differ");
  if ((a.spacing - b.spacing).cwiseAbs().maxCoeff() > 1e-6)
    throw std::invalid_argument(std::string(what) + ": voxel spacings differ");
}

// separable Gaussian smoothing with mirror boundary, in place
void smooth3(std::vector<double>& field, const std::array<int, 3>& dims,
             const Eigen::ArrayXd& kernel) {
  const int klen = int(kernel.size());
  const int center = (klen - 1) / 2;
  std::vector<double> tmp(field.size());
  const std::int64_t nx = dims[0], ny = dims[1], nz = dims[2];

  for (int axis = 0; axis < 3; ++axis) {
    const int n = dims[axis];
    const std::int64_t stride = axis == 0 ? 1 : axis == 1 ? nx : nx * ny;
    const int a1 = (axis + 1) % 3;
    const int a2 = (axis + 2) % 3;
    const std::int64_t stride_a1 = a1 == 0 ? 1 : a1 == 1 ? nx : nx * ny;
    const std::int64_t stride_a2 = a2 == 0 ? 1 : a2 == 1 ? nx : nx * ny;
    const int n1 = dims[a1], n2 = dims[a2];

    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        const std::int64_t base = i * stride_a1 + j * stride_a2;
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int t = 0; t < klen; ++t)
            acc += kernel[t] * field[base + std::int64_t(mirror_index(std::int64_t(k) + t - center, n)) * stride];
          tmp[base + k * stride] = acc;
        }
      }
    field.swap(tmp);
  }
}

}  // namespace

double mse(const Volume3& ref, const Volume3& test, const Volume3* mask) {
  require_same_grid(ref, test, "mse");
  if (mask) require_same_grid(ref, *mask, "mse mask");
  double acc = 0.0;
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < ref.size(); ++i) {
    if (mask && mask->data[i] == 0.0f) continue;
    const double d = double(ref.data[i]) - double(test.data[i]);
    acc += d * d;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("mse: empty mask");
  return acc / double(count);
}

double psnr_from_mse(double mse_value, double range) {
  if (!(range > 0)) throw std::invalid_argument("psnr range must be positive");
  if (mse_value < 1e-12 * range * range) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(range * range / mse_value);
}

double psnr(const Volume3& ref, const Volume3& test, std::optional<double> range,
            const Volume3* mask) {
  const double m = mse(ref, test, mask);
  const double r = range ? *range : double(ref.data.maxCoeff()) - double(ref.data.minCoeff());
  return psnr_from_mse(m, r);
}

double ssim(const Volume3& ref, const Volume3& test, const SsimParams& params,
            const Volume3* mask) {
  require_same_grid(ref, test, "ssim");
  if (mask) require_same_grid(ref, *mask, "ssim mask");
  for (int a = 0; a < 3; ++a)
    if (ref.dims[a] < params.window)
      throw std::invalid_argument("ssim: volume smaller than the window");

  double L;
  if (params.dynamic_range) {
    L = *params.dynamic_range;
  } else {
    L = double(ref.data.maxCoeff()) - double(ref.data.minCoeff());
    if (!(L > 0)) throw std::invalid_argument("ssim: zero dynamic range with auto L");
  }
  const double c1 = (params.k1 * L) * (params.k1 * L);
  const double c2 = (params.k2 * L) * (params.k2 * L);

  Eigen::ArrayXd kernel(params.window);
  const double center = (params.window - 1) / 2.0;
  for (int k = 0; k < params.window; ++k)
    kernel[k] = std::exp(-0.5 * std::pow((k - center) / params.sigma, 2));
  kernel /= kernel.sum();

  const std::size_t n = std::size_t(ref.size());
  std::vector<double> mx(n), my(n), mxx(n), myy(n), mxy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ref.data[Eigen::Index(i)];
    const double y = test.data[Eigen::Index(i)];
    mx[i] = x;
    my[i] = y;
    mxx[i] = x * x;
    myy[i] = y * y;
    mxy[i] = x * y;
  }
  smooth3(mx, ref.dims, kernel);
  smooth3(my, ref.dims, kernel);
  smooth3(mxx, ref.dims, kernel);
  smooth3(myy, ref.dims, kernel);
  smooth3(mxy, ref.dims, kernel);

  double acc = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask && mask->data[Eigen::Index(i)] == 0.0f) continue;
    const double ux = mx[i], uy = my[i];
    const double vx = mxx[i] - ux * ux;
    const double vy = myy[i] - uy * uy;
    const double cxy = mxy[i] - ux * uy;
    const double val = ((2.0 * ux * uy + c1) * (2.0 * cxy + c2)) /
                       ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    acc += val;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("ssim: empty mask");
  return acc / double(count);
}

}  // namespace anisosim
