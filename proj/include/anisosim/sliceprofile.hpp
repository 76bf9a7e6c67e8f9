#pragma once

#include <Eigen/Dense>

#include <string>

namespace anisosim {

/// Design parameters of the Shinnar-Le Roux excitation profile. Defaults
/// match the common excitation-pulse design: 64 taps, time-bandwidth 4,
/// 1% ripples, least-squares beta filter, 90-degree flip (max|B| = sin(pi/4)).
struct ProfileDesign {
  int taps = 64;
  double tb = 4.0;
  double d1 = 0.01;  // passband ripple before excitation conversion
  double d2 = 0.01;  // stopband ripple before excitation conversion
  double b_peak = 0.70710678118654752440;  // sin(pi/4)
  int grid = 4096;   // evaluation grid over the full frequency axis
};

/// Sampled through-plane point spread function. `samples` is the PSF
/// amplitude at uniform step `dz`; after normalize_profile the units of dz
/// are mm, the area sum(samples)*dz is 1 and `fwhm` holds the measured full
/// width at half maximum. Raw profiles from slr_profile carry dz in
/// normalized slice-width units instead.
struct SliceProfile {
  Eigen::ArrayXd samples;
  double dz = 1.0;
  double fwhm = 0.0;
  struct Meta {
    int taps = 0;
    double tb = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    std::string pulse = "ex";
    std::string filter = "ls";
  } meta;
};

/// Transition-width design constant D_inf(d1, d2) from the classic FIR
/// ripple-to-bandwidth fit. Ripples must lie in (0, 1).
double dinf(double d1, double d2);

/// Linear-phase beta polynomial of even length n designed by iteratively
/// reweighted least squares on a dense frequency grid (16n points), with
/// band edges (tb/2 -+ w*tb/2)/(n/2), w = dinf(d1', d2')/tb, where
/// d1' = sqrt(d1/2) and d2' = d2/sqrt(2) are the excitation-converted
/// ripples. The result is scaled so that max |B(w)| = b_peak.
Eigen::ArrayXd design_b_poly(int n, double tb, double d1, double d2,
                             double b_peak = 0.70710678118654752440);

/// Minimum-phase alpha polynomial with |A|^2 = 1 - |B|^2 on the unit circle,
/// via log-magnitude cepstral spectral factorization on a zero-padded FFT
/// grid of at least 16x the polynomial length. Requires max |B| < 1.
Eigen::ArrayXd b_to_a(const Eigen::ArrayXd& b);

/// Evaluates the polynomial on an N-point DFT grid (zero padded).
Eigen::ArrayXcd dft_response(const Eigen::ArrayXd& coeffs, int n_grid);

/// Unnormalized slice profile |Mxy| = |2 conj(A) B| over the full frequency
/// axis; dz is in slice-width units (the time-bandwidth spans one slice
/// width at FWHM).
SliceProfile slr_profile(const ProfileDesign& design = {});

/// Rescales the abscissa so the FWHM equals `thickness_mm`, resamples onto a
/// grid of step `dz_mm` (cubic B-spline), truncates amplitudes below
/// 1e-4 * peak and renormalizes to unit area.
SliceProfile normalize_profile(const SliceProfile& p, double thickness_mm, double dz_mm);

/// Full width at half maximum by linear interpolation of the half-max
/// crossings, in the profile's dz units. A single-sample profile measures
/// one dz wide by convention.
double fwhm(const SliceProfile& p);

}  // namespace anisosim
