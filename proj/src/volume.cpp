#include "anisosim/volume.hpp"

#include <cmath>
#include <stdexcept>

namespace anisosim {

int through_plane_axis(Orientation2D o) {
  switch (o) {
    case Orientation2D::Axial: return 2;
    case Orientation2D::Sagittal: return 0;
    case Orientation2D::Coronal: return 1;
  }
  throw std::logic_error("bad orientation enum");
}

std::string_view to_string(Orientation2D o) {
  switch (o) {
    case Orientation2D::Axial: return "axial";
    case Orientation2D::Sagittal: return "sagittal";
    case Orientation2D::Coronal: return "coronal";
  }
  throw std::logic_error("bad orientation enum");
}

std::optional<Orientation2D> orientation_from_string(std::string_view s) {
  if (s == "axial") return Orientation2D::Axial;
  if (s == "sagittal") return Orientation2D::Sagittal;
  if (s == "coronal") return Orientation2D::Coronal;
  return std::nullopt;
}

Volume3 make_volume(std::array<int, 3> dims, const Eigen::Vector3d& spacing,
                    const Eigen::Vector3d& origin) {
  Volume3 v;
  v.dims = dims;
  v.spacing = spacing;
  v.origin = origin;
  v.data = Eigen::ArrayXf::Zero(std::int64_t(dims[0]) * dims[1] * dims[2]);
  return v;
}

void validate(const Volume3& v) {
  for (int a = 0; a < 3; ++a) {
    if (v.dims[a] <= 0) throw std::invalid_argument("volume dims must be positive");
    if (!(v.spacing[a] > 0.0)) throw std::invalid_argument("voxel spacing must be positive");
  }
  if (v.data.size() != v.size())
    throw std::invalid_argument("data length does not match dims");
  const double det = v.orientation.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-6 ||
      (v.orientation.transpose() * v.orientation - Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() > 1e-6)
    throw std::invalid_argument("orientation matrix is not orthonormal");
}

Volume3 to_canonical(const Volume3& v, double tol) {
  validate(v);
  if (v.is_canonical(0.0)) return v;
  // Map each voxel axis j to the world axis where its direction cosine
  // is +-1; reject anything farther than tol from a signed permutation.
  int world_axis[3];
  int sign[3];
  bool used[3] = {false, false, false};
  for (int j = 0; j < 3; ++j) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(v.orientation(i, j)) > std::abs(v.orientation(best, j))) best = i;
    if (std::abs(std::abs(v.orientation(best, j)) - 1.0) > tol || used[best])
      throw std::invalid_argument("oblique orientation: not a signed permutation of axes");
    for (int i = 0; i < 3; ++i)
      if (i != best && std::abs(v.orientation(i, j)) > tol)
        throw std::invalid_argument("oblique orientation: not a signed permutation of axes");
    used[best] = true;
    world_axis[j] = best;
    sign[j] = v.orientation(best, j) > 0 ? 1 : -1;
  }

  Volume3 out;
  // new axis i gathers from old axis j where world_axis[j] == i
  int src_of[3];
  for (int j = 0; j < 3; ++j) src_of[world_axis[j]] = j;
  for (int i = 0; i < 3; ++i) {
    const int j = src_of[i];
    out.dims[i] = v.dims[j];
    out.spacing[i] = v.spacing[j];
  }
  out.orientation = Eigen::Matrix3d::Identity();
  // origin: world position of the voxel that becomes (0,0,0)
  int first[3];
  for (int j = 0; j < 3; ++j) first[j] = sign[j] > 0 ? 0 : v.dims[j] - 1;
  out.origin = v.world(first[0], first[1], first[2]);

  out.data.resize(v.data.size());
  for (int z = 0; z < out.dims[2]; ++z)
    for (int y = 0; y < out.dims[1]; ++y)
      for (int x = 0; x < out.dims[0]; ++x) {
        const int u[3] = {x, y, z};
        int old_idx[3];
        for (int j = 0; j < 3; ++j) {
          const int ui = u[world_axis[j]];
          old_idx[j] = sign[j] > 0 ? ui : v.dims[j] - 1 - ui;
        }
        out.at(x, y, z) = v.at(old_idx[0], old_idx[1], old_idx[2]);
      }
  return out;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// k-th unit variate of a seed: apply splitmix64 k+1 times, keep 53 bits.
double unit_variate(std::uint64_t seed, int k) {
  std::uint64_t s = seed;
  std::uint64_t v = 0;
  for (int i = 0; i <= k; ++i) {
    s = splitmix64(s);
    v = s;
  }
  return double(v >> 11) * (1.0 / 9007199254740992.0);  // 2^53
}

struct EllipsoidDef {
  double cx, cy, cz;  // center, fractions of extent
  double rx, ry, rz;  // semi-axes, fractions of half extent
  double intensity;
};

constexpr EllipsoidDef kBaseEllipsoids[5] = {
    {0.50, 0.50, 0.50, 0.88, 0.80, 0.84, 0.80},
    {0.50, 0.50, 0.50, 0.70, 0.62, 0.66, 0.45},
    {0.44, 0.55, 0.52, 0.28, 0.24, 0.26, 0.95},
    {0.60, 0.42, 0.46, 0.20, 0.24, 0.18, 0.20},
    {0.52, 0.62, 0.40, 0.14, 0.12, 0.16, 0.65},
};

}  // namespace

Volume3 phantom_ellipsoids(int n, const PhantomParams& params) {
  if (n < 32) throw std::invalid_argument("phantom dims must be >= 32");
  if (!(params.spacing_mm > 0)) throw std::invalid_argument("phantom spacing must be positive");
  Volume3 v = make_volume({n, n, n}, Eigen::Vector3d::Constant(params.spacing_mm));

  const double ext = (n - 1) * params.spacing_mm;
  const double half = ext / 2.0;
  std::vector<double> acc(std::size_t(v.size()), 0.0);

  for (int e = 0; e < 5; ++e) {
    const EllipsoidDef& d = kBaseEllipsoids[e];
    auto jc = [&](int k) { return (unit_variate(params.seed, e * 8 + k) - 0.5) * 0.04; };
    auto jr = [&](int k) { return 1.0 + (unit_variate(params.seed, e * 8 + 3 + k) - 0.5) * 0.10; };
    const double ji = (unit_variate(params.seed, e * 8 + 7) - 0.5) * 0.08;

    const double c[3] = {(d.cx + jc(0)) * ext, (d.cy + jc(1)) * ext, (d.cz + jc(2)) * ext};
    const double r[3] = {d.rx * jr(0) * half, d.ry * jr(1) * half, d.rz * jr(2) * half};
    const double inten = std::clamp(d.intensity + ji, 0.0, 1.0);
    const double rmin = std::min({r[0], r[1], r[2]});

    std::int64_t idx = 0;
    for (int z = 0; z < n; ++z) {
      const double pz = z * params.spacing_mm;
      const double dz = (pz - c[2]) / r[2];
      for (int y = 0; y < n; ++y) {
        const double py = y * params.spacing_mm;
        const double dy = (py - c[1]) / r[1];
        for (int x = 0; x < n; ++x, ++idx) {
          const double px = x * params.spacing_mm;
          const double dx = (px - c[0]) / r[0];
          const double rho = std::sqrt(dx * dx + dy * dy + dz * dz);
          const double t = (1.0 - rho) * rmin;  // approx signed distance, mm
          double s = std::clamp(t / params.feather_mm + 0.5, 0.0, 1.0);
          s = s * s * (3.0 - 2.0 * s);
          acc[idx] = acc[idx] * (1.0 - s) + inten * s;
        }
      }
    }
  }
  for (std::int64_t i = 0; i < v.size(); ++i) v.data[i] = float(acc[i]);
  return v;
}

Volume3 phantom_grating(int n, const PhantomParams& params) {
  if (n < 32) throw std::invalid_argument("phantom dims must be >= 32");
  if (params.axis < 0 || params.axis > 2) throw std::invalid_argument("grating axis must be 0, 1 or 2");
  if (!(params.period_mm >= 2.0)) throw std::invalid_argument("grating period must be >= 2 mm");
  if (!(params.spacing_mm > 0)) throw std::invalid_argument("phantom spacing must be positive");
  Volume3 v = make_volume({n, n, n}, Eigen::Vector3d::Constant(params.spacing_mm));

  std::int64_t idx = 0;
  const int axis = params.axis;
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x, ++idx) {
        const int i = axis == 0 ? x : axis == 1 ? y : z;
        const double p = i * params.spacing_mm;
        v.data[idx] = float(0.5 + 0.5 * std::sin(2.0 * M_PI * p / params.period_mm));
      }
  return v;
}

}  // namespace anisosim
