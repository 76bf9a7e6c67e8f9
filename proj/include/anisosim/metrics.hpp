#pragma once

#include <optional>

#include "anisosim/volume.hpp"

namespace anisosim {

/// SSIM stabilizers and window. The window is a 3D Gaussian, 11^3 taps with
/// sigma 1.5 voxels, applied volumetrically with mirror boundary; the
/// dynamic range L defaults to max(ref) - min(ref) when unset.
struct SsimParams {
  double k1 = 0.01;
  double k2 = 0.03;
  int window = 11;
  double sigma = 1.5;
  std::optional<double> dynamic_range;
};

/// Mean squared difference over all voxels, or over the nonzero voxels of
/// `mask` when given. Grids must match.
double mse(const Volume3& ref, const Volume3& test, const Volume3* mask = nullptr);

/// 10 log10(range^2 / mse); +infinity when mse < 1e-12 * range^2.
double psnr_from_mse(double mse_value, double range);

/// PSNR in dB; range defaults to max(ref) - min(ref).
double psnr(const Volume3& ref, const Volume3& test, std::optional<double> range = {},
            const Volume3* mask = nullptr);

/// Mean of the local SSIM map (Gaussian-weighted local statistics,
/// C1 = (k1 L)^2, C2 = (k2 L)^2, mirror boundary).
double ssim(const Volume3& ref, const Volume3& test, const SsimParams& params = {},
            const Volume3* mask = nullptr);

}  // namespace anisosim
