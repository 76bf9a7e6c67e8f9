#pragma once

#include <string>
#include <vector>

#include "anisosim/sliceprofile.hpp"
#include "anisosim/volume.hpp"

namespace anisosim {

/// Acquisition resolution written "thickness || gap" (both mm). Slice
/// spacing, the center-to-center distance, is their sum.
struct ResolutionSpec {
  double thickness_mm = 0.0;
  double gap_mm = 0.0;

  double spacing_mm() const { return thickness_mm + gap_mm; }
  std::string str() const;
  static ResolutionSpec parse(const std::string& text);
};

bool operator==(const ResolutionSpec& a, const ResolutionSpec& b);

/// The eight evaluated resolutions, from 3||0 (highest) to 5||1.5 (lowest).
const std::vector<ResolutionSpec>& default_resolutions();

/// Convolves every line along `axis` with the profile (discrete weights are
/// samples * dz, which sum to one for a unit-area profile), mirror boundary.
/// The profile step must match the voxel spacing along the axis.
Volume3 blur_axis(const Volume3& vol, const SliceProfile& p, int axis);

/// Samples the volume at positions k * spacing_out along `axis`,
/// k = 0 .. floor(extent / spacing_out); the first output sample coincides
/// with the first input voxel center. Requires spacing_out >= input spacing.
Volume3 downsample_axis(const Volume3& vol, double spacing_out, int axis);

/// The 2D-acquisition simulator: slice-profile blur at the requested
/// thickness followed by downsampling at the slice spacing along the
/// through-plane axis of `orient`. In-plane axes are untouched.
Volume3 simulate_acquisition(const Volume3& vol, const ResolutionSpec& res, Orientation2D orient,
                             const ProfileDesign& design = {});

/// Same, with a profile already normalized to the resolution's thickness at
/// the volume's through-plane spacing (lets callers reuse one design).
Volume3 simulate_acquisition(const Volume3& vol, const ResolutionSpec& res, Orientation2D orient,
                             const SliceProfile& profile);

/// Separable cubic B-spline resampling onto a `target`-spaced grid spanning
/// the same world extent, origin preserved; per-axis count is
/// floor(extent/target) + 1. Axes already at the target spacing pass through
/// untouched.
Volume3 resample_isotropic(const Volume3& vol, double target_mm = 1.0);

/// Resampling onto an explicit reference grid (dims at uniform target
/// spacing, same origin); positions beyond the source extent follow the
/// spline's mirror extension. This is the simulation stand-in for
/// registering a degraded image back onto the fixed 1 mm reference space.
Volume3 resample_to_grid(const Volume3& vol, const std::array<int, 3>& dims, double target_mm);

}  // namespace anisosim
