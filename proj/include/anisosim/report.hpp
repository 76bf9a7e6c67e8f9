#pragma once

#include <string>
#include <vector>

#include "anisosim/harness.hpp"

namespace anisosim {

/// Writes one standalone SVG box plot for a single experiment and metric
/// ("psnr" or "ssim"): x axis walks the resolutions in thickness-major
/// order, with one box per contrast in each cluster. Records with infinite
/// PSNR are excluded from the boxes.
void write_boxplot_svg(const std::vector<MetricsRecord>& records, const std::string& experiment,
                       const std::string& metric, const std::string& path);

/// Emits <outdir>/exp<ID>_{psnr,ssim}.svg for every experiment present in
/// the records, plus summary.csv; returns the number of SVG files written.
int write_report(const std::vector<MetricsRecord>& records, const std::string& outdir);

}  // namespace anisosim
