#include "anisosim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace anisosim {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kContrastColor[3] = {"#4c72b0", "#dd8452", "#55a868"};

struct Box {
  MetricSummary stats;
  int inf_count = 0;
  int total = 0;
};

// nice tick step covering roughly 5-8 ticks
double tick_step(double span) {
  if (!(span > 0)) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

void write_boxplot_svg(const std::vector<MetricsRecord>& records, const std::string& experiment,
                       const std::string& metric, const std::string& path) {
  if (metric != "psnr" && metric != "ssim")
    throw std::invalid_argument("metric must be \"psnr\" or \"ssim\"");
  const bool is_psnr = metric == "psnr";

  // resolutions present for this experiment, thickness-major order
  std::set<std::pair<double, double>> res_set;
  for (const auto& r : records)
    if (r.experiment == experiment) res_set.insert({r.thickness_mm, r.gap_mm});
  std::vector<ResolutionSpec> res;
  for (const auto& [t, g] : res_set) res.push_back({t, g});

  std::map<std::pair<int, int>, Box> boxes;  // (resolution idx, contrast idx)
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t ri = 0; ri < res.size(); ++ri) {
    for (int ci = 0; ci < 3; ++ci) {
      std::vector<double> vals;
      int infs = 0, total = 0;
      for (const auto& r : records) {
        if (r.experiment != experiment || r.contrast != Contrast(ci)) continue;
        if (r.thickness_mm != res[ri].thickness_mm || r.gap_mm != res[ri].gap_mm) continue;
        ++total;
        const double v = is_psnr ? r.psnr_db : r.ssim;
        if (std::isinf(v)) {
          ++infs;
          continue;
        }
        vals.push_back(v);
      }
      Box box;
      box.total = total;
      box.inf_count = infs;
      if (!vals.empty()) {
        std::sort(vals.begin(), vals.end());
        auto q = [&](double p) {
          const double h = (vals.size() - 1) * p;
          const std::size_t k = std::size_t(std::floor(h));
          if (k + 1 >= vals.size()) return vals.back();
          return vals[k] + (h - k) * (vals[k + 1] - vals[k]);
        };
        box.stats.n = int(vals.size());
        box.stats.min = vals.front();
        box.stats.max = vals.back();
        box.stats.q1 = q(0.25);
        box.stats.median = q(0.5);
        box.stats.q3 = q(0.75);
        lo = std::min(lo, box.stats.min);
        hi = std::max(hi, box.stats.max);
      }
      boxes[{int(ri), ci}] = box;
    }
  }

  const double width = 980, height = 520;
  const double ml = 70, mr = 20, mt = 48, mb = 64;
  const double pw = width - ml - mr, ph = height - mt - mb;

  const bool have_data = std::isfinite(lo) && std::isfinite(hi);
  if (have_data) {
    double pad = (hi - lo) * 0.08;
    if (pad <= 0) pad = std::max(std::abs(hi) * 0.05, 0.01);
    lo -= pad;
    hi += pad;
  } else {
    lo = 0;
    hi = 1;
  }
  auto ytopix = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
         "text-anchor=\"middle\">Experiment "
      << xml_escape(experiment) << " &#8212; " << (is_psnr ? "PSNR (dB)" : "SSIM") << "</text>\n";

  // y axis with ticks
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  const double step = tick_step(hi - lo);
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
    const double y = ytopix(v);
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << ml - 9 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(v, "%g")
        << "</text>\n";
  }

  const double cluster_w = pw / std::max<std::size_t>(res.size(), 1);
  const double box_w = std::min(cluster_w / 4.5, 26.0);
  for (std::size_t ri = 0; ri < res.size(); ++ri) {
    const double cx = ml + cluster_w * (ri + 0.5);
    svg << "<text x=\"" << cx << "\" y=\"" << mt + ph + 20
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << xml_escape(res[ri].str()) << "</text>\n";
    for (int ci = 0; ci < 3; ++ci) {
      const Box& b = boxes[{int(ri), ci}];
      if (b.stats.n == 0) continue;
      const double x = cx + (ci - 1) * (box_w + 6);
      const double x0 = x - box_w / 2, x1 = x + box_w / 2;
      const char* col = kContrastColor[ci];
      const double yq1 = ytopix(b.stats.q1), yq3 = ytopix(b.stats.q3);
      const double ymed = ytopix(b.stats.median);
      const double ymin = ytopix(b.stats.min), ymax = ytopix(b.stats.max);
      svg << "<line x1=\"" << x << "\" y1=\"" << ymax << "\" x2=\"" << x << "\" y2=\"" << yq3
          << "\" stroke=\"" << col << "\"/>\n";
      svg << "<line x1=\"" << x << "\" y1=\"" << yq1 << "\" x2=\"" << x << "\" y2=\"" << ymin
          << "\" stroke=\"" << col << "\"/>\n";
      svg << "<line x1=\"" << x0 << "\" y1=\"" << ymax << "\" x2=\"" << x1 << "\" y2=\"" << ymax
          << "\" stroke=\"" << col << "\"/>\n";
      svg << "<line x1=\"" << x0 << "\" y1=\"" << ymin << "\" x2=\"" << x1 << "\" y2=\"" << ymin
          << "\" stroke=\"" << col << "\"/>\n";
      svg << "<rect x=\"" << x0 << "\" y=\"" << yq3 << "\" width=\"" << box_w << "\" height=\""
          << std::max(yq1 - yq3, 0.5) << "\" fill=\"" << col << "\" fill-opacity=\"0.45\" stroke=\""
          << col << "\"/>\n";
      svg << "<line x1=\"" << x0 << "\" y1=\"" << ymed << "\" x2=\"" << x1 << "\" y2=\"" << ymed
          << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    }
  }

  // legend
  for (int ci = 0; ci < 3; ++ci) {
    const double lx = ml + pw - 200 + ci * 66;
    svg << "<rect x=\"" << lx << "\" y=\"" << mt - 16 << "\" width=\"12\" height=\"12\" fill=\""
        << kContrastColor[ci] << "\" fill-opacity=\"0.6\"/>\n";
    svg << "<text x=\"" << lx + 16 << "\" y=\"" << mt - 6
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << to_string(Contrast(ci))
        << "</text>\n";
  }
  if (!have_data)
    svg << "<text x=\"" << width / 2 << "\" y=\"" << mt + ph / 2
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">no finite "
           "data</text>\n";
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg.str();
}

int write_report(const std::vector<MetricsRecord>& records, const std::string& outdir) {
  if (records.empty()) throw std::invalid_argument("no records to report");
  fs::create_directories(outdir);

  std::vector<std::string> experiments;
  for (const auto& r : records)
    if (std::find(experiments.begin(), experiments.end(), r.experiment) == experiments.end())
      experiments.push_back(r.experiment);
  std::sort(experiments.begin(), experiments.end());

  int count = 0;
  for (const auto& exp : experiments) {
    for (const char* metric : {"psnr", "ssim"}) {
      const fs::path p = fs::path(outdir) / ("exp" + exp + "_" + metric + ".svg");
      write_boxplot_svg(records, exp, metric, p.string());
      ++count;
    }
  }
  write_summary_csv(summarize(records), (fs::path(outdir) / "summary.csv").string());
  return count;
}

}  // namespace anisosim
