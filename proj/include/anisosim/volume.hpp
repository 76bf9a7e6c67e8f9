#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace anisosim {

/// 2D acquisition orientation. The through-plane axis in canonical RAS
/// coordinates is z for axial, x for sagittal and y for coronal stacks.
enum class Orientation2D { Axial, Sagittal, Coronal };

int through_plane_axis(Orientation2D o);
std::string_view to_string(Orientation2D o);
std::optional<Orientation2D> orientation_from_string(std::string_view s);

/// A 3D scalar image on a regular grid. Voxel intensities are float32,
/// geometry is double precision. `data` is stored x-fastest, so
/// data[x + nx*(y + ny*z)] is the voxel at index (x, y, z). `orientation`
/// holds direction cosines: column j is the world (RAS) direction of voxel
/// axis j. `origin` is the world position of the center of voxel (0,0,0).
///
/// Volumes are immutable values by convention: every pipeline operation
/// returns a new volume, which makes them safe to share across workers.
struct Volume3 {
  Eigen::ArrayXf data;
  std::array<int, 3> dims{0, 0, 0};
  Eigen::Vector3d spacing{1.0, 1.0, 1.0};
  Eigen::Vector3d origin{0.0, 0.0, 0.0};
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();

  std::int64_t size() const {
    return std::int64_t(dims[0]) * dims[1] * dims[2];
  }
  std::int64_t index(int x, int y, int z) const {
    return std::int64_t(x) + std::int64_t(dims[0]) * (std::int64_t(y) + std::int64_t(dims[1]) * z);
  }
  float at(int x, int y, int z) const { return data[index(x, y, z)]; }
  float& at(int x, int y, int z) { return data[index(x, y, z)]; }

  /// World extent along one axis, (n-1)*spacing.
  double extent(int axis) const { return (dims[axis] - 1) * spacing[axis]; }

  Eigen::Vector3d world(int x, int y, int z) const {
    Eigen::Vector3d v(x * spacing[0], y * spacing[1], z * spacing[2]);
    return origin + orientation * v;
  }

  bool is_canonical(double tol = 1e-6) const {
    return (orientation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol;
  }
  bool is_isotropic(double tol = 1e-9) const {
    return std::abs(spacing[0] - spacing[1]) <= tol && std::abs(spacing[1] - spacing[2]) <= tol;
  }
};

/// Zero-filled volume with identity orientation.
Volume3 make_volume(std::array<int, 3> dims, const Eigen::Vector3d& spacing,
                    const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

/// Throws std::invalid_argument if the volume violates its invariants
/// (size mismatch, non-positive spacing, non-orthonormal orientation).
void validate(const Volume3& v);

/// Permutes and flips axes so that orientation becomes the identity while
/// every voxel keeps its world position. Requires the orientation to be
/// within `tol` of a signed permutation matrix (no oblique volumes).
Volume3 to_canonical(const Volume3& v, double tol = 1e-3);

struct PhantomParams {
  std::uint64_t seed = 1;
  double spacing_mm = 1.0;
  double feather_mm = 1.5;  // ellipsoid edge transition width
  int axis = 2;             // grating axis
  double period_mm = 6.0;   // grating period
};

/// Smooth composite of five nested ellipsoids with distinct intensities in
/// [0, 1]. Deterministic for a given seed (jitter comes from splitmix64, not
/// from any library RNG, so results are identical across platforms).
Volume3 phantom_ellipsoids(int n, const PhantomParams& params = {});

/// 0.5 + 0.5*sin(2*pi*p/period) along the chosen axis, constant elsewhere;
/// p is the world coordinate in mm measured from the first voxel center.
Volume3 phantom_grating(int n, const PhantomParams& params = {});

}  // namespace anisosim
