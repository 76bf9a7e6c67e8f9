#include "anisosim/sliceprofile.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "anisosim/bspline.hpp"

namespace anisosim {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::ArrayXcd fft_forward(const Eigen::ArrayXcd& in) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> src(in.data(), in.data() + in.size());
  std::vector<std::complex<double>> dst;
  fft.fwd(dst, src);
  return Eigen::Map<const Eigen::ArrayXcd>(dst.data(), Eigen::Index(dst.size()));
}

Eigen::ArrayXcd fft_inverse(const Eigen::ArrayXcd& in) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> src(in.data(), in.data() + in.size());
  std::vector<std::complex<double>> dst;
  fft.inv(dst, src);
  return Eigen::Map<const Eigen::ArrayXcd>(dst.data(), Eigen::Index(dst.size()));
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Minimum-phase spectrum with the given magnitude samples: fold the real
// cepstrum causally and exponentiate.
Eigen::ArrayXcd min_phase_spectrum(const Eigen::ArrayXd& mag) {
  const int n = int(mag.size());
  Eigen::ArrayXcd logmag = mag.log().cast<std::complex<double>>();
  Eigen::ArrayXcd cep = fft_inverse(logmag);
  Eigen::ArrayXcd folded = Eigen::ArrayXcd::Zero(n);
  folded[0] = cep[0];
  for (int k = 1; k < n / 2; ++k) folded[k] = 2.0 * cep[k];
  folded[n / 2] = cep[n / 2];
  return fft_forward(folded).exp();
}

}  // namespace

double dinf(double d1, double d2) {
  if (!(d1 > 0.0 && d1 < 1.0 && d2 > 0.0 && d2 < 1.0))
    throw std::invalid_argument("dinf ripples must lie in (0, 1)");
  constexpr double a1 = 5.309e-3, a2 = 7.114e-2, a3 = -4.761e-1;
  constexpr double a4 = -2.66e-3, a5 = -5.941e-1, a6 = -4.278e-1;
  const double l1 = std::log10(d1);
  const double l2 = std::log10(d2);
  return (a1 * l1 * l1 + a2 * l1 + a3) * l2 + (a4 * l1 * l1 + a5 * l1 + a6);
}

Eigen::ArrayXd design_b_poly(int n, double tb, double d1, double d2, double b_peak) {
  if (n < 16 || n % 2 != 0) throw std::invalid_argument("taps must be even and >= 16");
  if (!(tb >= 2.0)) throw std::invalid_argument("time-bandwidth must be >= 2");
  if (!(tb < n / 2.0)) throw std::invalid_argument("time-bandwidth must be < n/2");
  if (!(b_peak > 0.0 && b_peak < 1.0)) throw std::invalid_argument("b_peak must be in (0, 1)");

  const double d1p = std::sqrt(d1 / 2.0);  // excitation ripple conversion
  const double d2p = d2 / std::sqrt(2.0);
  const double w = dinf(d1p, d2p) / tb;
  if (w >= 1.0) throw std::invalid_argument("infeasible band edges (transition wider than band)");
  const double f1 = (tb / 2.0 - w * tb / 2.0) / (n / 2.0);
  const double f2 = (tb / 2.0 + w * tb / 2.0) / (n / 2.0);
  if (!(f1 > 0.0) || !(f2 < 1.0)) throw std::invalid_argument("infeasible band edges");

  // dense grid over [0, 1] in fractional frequency (1 = Nyquist),
  // transition band left unconstrained
  const int G = 16 * n;
  std::vector<double> fk, tgt, base;
  for (int g = 0; g < G; ++g) {
    const double f = double(g) / (G - 1);
    if (f <= f1) {
      fk.push_back(f);
      tgt.push_back(1.0);
      base.push_back(1.0 / d1p);
    } else if (f >= f2) {
      fk.push_back(f);
      tgt.push_back(0.0);
      base.push_back(1.0 / d2p);
    }
  }

  const int rows = int(fk.size());
  const int M = n / 2;  // unknown half of the symmetric filter
  const double delay = (n - 1) / 2.0;
  Eigen::MatrixXd phi(rows, M);
  for (int r = 0; r < rows; ++r)
    for (int m = 0; m < M; ++m) phi(r, m) = 2.0 * std::cos(kPi * fk[r] * (delay - m));

  Eigen::Map<const Eigen::VectorXd> target(tgt.data(), rows);
  Eigen::Map<const Eigen::VectorXd> ripple_w(base.data(), rows);

  // Lawson-style iteratively reweighted least squares: reweighting by the
  // ripple-scaled residual drives the solution toward uniform band ripple,
  // which plain one-shot least squares cannot reach at these tolerances.
  const int kIters = 30;
  Eigen::VectorXd wt = ripple_w;
  Eigen::VectorXd c;
  for (int it = 0; it <= kIters; ++it) {
    Eigen::MatrixXd wphi = wt.asDiagonal() * phi;
    Eigen::VectorXd wtgt = wt.cwiseProduct(target);
    c = wphi.colPivHouseholderQr().solve(wtgt);
    if (it == kIters) break;
    Eigen::VectorXd r = ((phi * c - target).cwiseAbs()).cwiseProduct(ripple_w);
    const double rmax = r.maxCoeff();
    for (int i = 0; i < rows; ++i)
      wt[i] *= std::sqrt(std::max(r[i] / rmax, 1e-3));
    wt *= ripple_w.maxCoeff() / wt.maxCoeff();
  }

  Eigen::ArrayXd b(n);
  for (int m = 0; m < M; ++m) {
    b[m] = c[m];
    b[n - 1 - m] = c[m];
  }

  const double bmax = dft_response(b, 4096).abs().maxCoeff();
  b *= b_peak / bmax;
  return b;
}

Eigen::ArrayXcd dft_response(const Eigen::ArrayXd& coeffs, int n_grid) {
  Eigen::ArrayXcd padded = Eigen::ArrayXcd::Zero(n_grid);
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) padded[k] = coeffs[k];
  return fft_forward(padded);
}

Eigen::ArrayXd b_to_a(const Eigen::ArrayXd& b) {
  const int n = int(b.size());
  if (n < 1) throw std::invalid_argument("b_to_a needs a non-empty polynomial");
  const int N = std::max(4096, next_pow2(16 * n));
  const Eigen::ArrayXcd bf = dft_response(b, N);
  const Eigen::ArrayXd mag2 = 1.0 - bf.abs2();
  if (mag2.minCoeff() < -1e-9)
    throw std::invalid_argument("|B| reaches 1: unphysical profile");
  const Eigen::ArrayXd amag = mag2.max(1e-18).sqrt();
  const Eigen::ArrayXcd a_grid = min_phase_spectrum(amag);
  const Eigen::ArrayXcd a_full = fft_inverse(a_grid);
  return a_full.head(n).real();
}

SliceProfile slr_profile(const ProfileDesign& design) {
  if (design.grid < 512) throw std::invalid_argument("profile grid must be >= 512");
  const Eigen::ArrayXd b = design_b_poly(design.taps, design.tb, design.d1, design.d2, design.b_peak);
  const Eigen::ArrayXd a = b_to_a(b);

  const int N = design.grid;
  const Eigen::ArrayXcd B = dft_response(b, N);
  const Eigen::ArrayXcd A = dft_response(a, N);
  const Eigen::ArrayXcd mxy = 2.0 * A.conjugate() * B;

  SliceProfile p;
  p.samples.resize(N);
  // fftshift so the slice center sits mid-array
  const int half = N / 2;
  for (int k = 0; k < N; ++k) p.samples[k] = std::abs(mxy[(k + half) % N]);
  p.dz = (double(design.taps) / design.tb) / N;  // slice widths per sample
  p.meta.taps = design.taps;
  p.meta.tb = design.tb;
  p.meta.d1 = design.d1;
  p.meta.d2 = design.d2;
  p.fwhm = fwhm(p);
  return p;
}

double fwhm(const SliceProfile& p) {
  const auto& s = p.samples;
  const int n = int(s.size());
  if (n == 0) throw std::invalid_argument("empty profile");
  int peak = 0;
  for (int k = 1; k < n; ++k)
    if (s[k] > s[peak]) peak = k;
  if (!(s[peak] > 0)) throw std::invalid_argument("profile peak must be positive");
  if (n == 1) return p.dz;  // single-sample convention

  const double half = s[peak] / 2.0;
  int li = -1;
  for (int k = peak; k-- > 0;)
    if (s[k] < half) {
      li = k;
      break;
    }
  int ri = -1;
  for (int k = peak + 1; k < n; ++k)
    if (s[k] < half) {
      ri = k;
      break;
    }
  if (li < 0 || ri < 0) throw std::invalid_argument("profile has no half-maximum crossing");

  const double xl = li + (half - s[li]) / (s[li + 1] - s[li]);
  const double xr = (ri - 1) + (s[ri - 1] - half) / (s[ri - 1] - s[ri]);
  return (xr - xl) * p.dz;
}

SliceProfile normalize_profile(const SliceProfile& p, double thickness_mm, double dz_mm) {
  if (!(thickness_mm > 0)) throw std::invalid_argument("thickness must be positive");
  if (!(dz_mm > 0)) throw std::invalid_argument("dz must be positive");
  const double fw = fwhm(p);  // in the profile's own units

  const double scale = thickness_mm / fw;       // mm per profile unit
  const double step_mm = p.dz * scale;          // mm per raw sample
  const double center = (p.samples.size() - 1) / 2.0;

  const int K = int(std::floor(center * step_mm / dz_mm));
  const SplineLine line = prefilter(p.samples);
  Eigen::ArrayXd q(2 * K + 1);
  for (int k = -K; k <= K; ++k)
    q[k + K] = std::max(eval(line, center + k * dz_mm / step_mm), 0.0);

  const double peak = q.maxCoeff();
  if (!(peak > 0)) throw std::invalid_argument("degenerate profile after resampling");
  int first = 0, last = int(q.size()) - 1;
  while (first < last && q[first] < 1e-4 * peak) ++first;
  while (last > first && q[last] < 1e-4 * peak) --last;

  SliceProfile out;
  out.samples = q.segment(first, last - first + 1);
  out.dz = dz_mm;
  out.samples /= out.samples.sum() * dz_mm;  // unit area
  out.meta = p.meta;
  out.fwhm = fwhm(out);
  return out;
}

}  // namespace anisosim
