#include "anisosim/degrade.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "anisosim/bspline.hpp"

namespace anisosim {

std::string ResolutionSpec::str() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g||%g", thickness_mm, gap_mm);
  return buf;
}

ResolutionSpec ResolutionSpec::parse(const std::string& text) {
  const auto sep = text.find("||");
  if (sep == std::string::npos)
    throw std::invalid_argument("resolution must be written \"thickness||gap\": " + text);
  ResolutionSpec r;
  try {
    std::size_t used = 0;
    r.thickness_mm = std::stod(text.substr(0, sep), &used);
    if (used != sep) throw std::invalid_argument(text);
    std::string rest = text.substr(sep + 2);
    r.gap_mm = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse resolution \"" + text + "\"");
  }
  if (!(r.thickness_mm > 0)) throw std::invalid_argument("slice thickness must be positive");
  if (r.gap_mm < 0) throw std::invalid_argument("slice gap must be non-negative");
  return r;
}

bool operator==(const ResolutionSpec& a, const ResolutionSpec& b) {
  return a.thickness_mm == b.thickness_mm && a.gap_mm == b.gap_mm;
}

const std::vector<ResolutionSpec>& default_resolutions() {
  static const std::vector<ResolutionSpec> set = {
      {3.0, 0.0}, {3.0, 1.0}, {4.0, 0.0}, {4.0, 1.0},
      {4.0, 1.2}, {5.0, 0.0}, {5.0, 1.0}, {5.0, 1.5},
  };
  return set;
}

Volume3 blur_axis(const Volume3& vol, const SliceProfile& p, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  if (!vol.is_canonical()) throw std::invalid_argument("blur_axis expects a canonical volume");
  if (std::abs(p.dz - vol.spacing[axis]) > 1e-6)
    throw std::invalid_argument("profile step does not match voxel spacing along the blur axis");

  const int klen = int(p.samples.size());
  const int center = (klen - 1) / 2;
  Eigen::ArrayXd w = p.samples * p.dz;  // unit-sum discrete weights

  Volume3 out = vol;
  const int n = vol.dims[axis];
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  const std::int64_t stride = vol.index(axis == 0, axis == 1, axis == 2);
  const std::int64_t stride_a1 = vol.index(a1 == 0, a1 == 1, a1 == 2);
  const std::int64_t stride_a2 = vol.index(a2 == 0, a2 == 1, a2 == 2);

  Eigen::ArrayXd buf(n);
  for (int j = 0; j < vol.dims[a2]; ++j)
    for (int i = 0; i < vol.dims[a1]; ++i) {
      const std::int64_t base = i * stride_a1 + j * stride_a2;
      for (int k = 0; k < n; ++k) buf[k] = vol.data[base + k * stride];
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int t = 0; t < klen; ++t)
          acc += w[t] * buf[mirror_index(std::int64_t(k) + t - center, n)];
        out.data[base + k * stride] = float(acc);
      }
    }
  return out;
}

Volume3 downsample_axis(const Volume3& vol, double spacing_out, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  const double spacing_in = vol.spacing[axis];
  if (spacing_out < spacing_in - 1e-9)
    throw std::invalid_argument("downsample_axis cannot upsample (spacing_out < input spacing)");

  const double extent = vol.extent(axis);
  const int count = int(std::floor(extent / spacing_out + 1e-9)) + 1;
  Eigen::ArrayXd positions(count);
  for (int k = 0; k < count; ++k) positions[k] = k * spacing_out / spacing_in;
  return resample_volume(vol, axis, positions);
}

Volume3 simulate_acquisition(const Volume3& vol, const ResolutionSpec& res, Orientation2D orient,
                             const ProfileDesign& design) {
  if (!vol.is_canonical()) throw std::invalid_argument("simulate_acquisition expects a canonical volume");
  if (!vol.is_isotropic(1e-6)) throw std::invalid_argument("simulate_acquisition expects an isotropic volume");
  if (!(res.thickness_mm > 0)) throw std::invalid_argument("slice thickness must be positive");
  if (res.gap_mm < 0) throw std::invalid_argument("slice gap must be non-negative");

  const int axis = through_plane_axis(orient);
  const SliceProfile prof =
      normalize_profile(slr_profile(design), res.thickness_mm, vol.spacing[axis]);
  return simulate_acquisition(vol, res, orient, prof);
}

Volume3 simulate_acquisition(const Volume3& vol, const ResolutionSpec& res, Orientation2D orient,
                             const SliceProfile& profile) {
  if (!vol.is_canonical()) throw std::invalid_argument("simulate_acquisition expects a canonical volume");
  if (!vol.is_isotropic(1e-6)) throw std::invalid_argument("simulate_acquisition expects an isotropic volume");
  const int axis = through_plane_axis(orient);
  const Volume3 blurred = blur_axis(vol, profile, axis);
  return downsample_axis(blurred, res.spacing_mm(), axis);
}

Volume3 resample_isotropic(const Volume3& vol, double target_mm) {
  if (!(target_mm > 0)) throw std::invalid_argument("target spacing must be positive");
  Volume3 out = vol;
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(out.spacing[axis] - target_mm) <= 1e-12) continue;  // exact pass-through
    const double extent = out.extent(axis);
    const int count = int(std::floor(extent / target_mm + 1e-9)) + 1;
    Eigen::ArrayXd positions(count);
    for (int k = 0; k < count; ++k) positions[k] = k * target_mm / out.spacing[axis];
    out = resample_volume(out, axis, positions);
  }
  return out;
}

Volume3 resample_to_grid(const Volume3& vol, const std::array<int, 3>& dims, double target_mm) {
  if (!(target_mm > 0)) throw std::invalid_argument("target spacing must be positive");
  Volume3 out = vol;
  for (int axis = 0; axis < 3; ++axis) {
    if (out.dims[axis] == dims[axis] && std::abs(out.spacing[axis] - target_mm) <= 1e-12)
      continue;
    Eigen::ArrayXd positions(dims[axis]);
    for (int k = 0; k < dims[axis]; ++k) positions[k] = k * target_mm / out.spacing[axis];
    out = resample_volume(out, axis, positions);
  }
  return out;
}

}  // namespace anisosim
