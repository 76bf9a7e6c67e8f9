#include "anisosim/harness.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include <json.hpp>

#include "anisosim/metrics.hpp"
#include "anisosim/nifti.hpp"

namespace fs = std::filesystem;

namespace anisosim {

namespace {

std::string fmt_g6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

constexpr const char* kResultsHeader =
    "subject,experiment,contrast,orientation,thickness_mm,gap_mm,spacing_mm,psnr_db,ssim";

}  // namespace

std::string_view to_string(Contrast c) {
  switch (c) {
    case Contrast::T1w: return "T1w";
    case Contrast::T2w: return "T2w";
    default: return "FLAIR";
  }
}

std::string_view config_key(Contrast c) {
  switch (c) {
    case Contrast::T1w: return "t1w";
    case Contrast::T2w: return "t2w";
    default: return "flair";
  }
}

std::optional<Contrast> contrast_from_string(std::string_view s) {
  if (s == "T1w" || s == "t1w") return Contrast::T1w;
  if (s == "T2w" || s == "t2w") return Contrast::T2w;
  if (s == "FLAIR" || s == "flair") return Contrast::Flair;
  return std::nullopt;
}

std::string AcqSpec::orientation_label() const {
  return three_d ? "3D" : std::string(to_string(orientation));
}

bool operator==(const AcqSpec& a, const AcqSpec& b) {
  return a.three_d == b.three_d && (a.three_d || a.orientation == b.orientation);
}

std::vector<ExperimentConfig> builtin_experiments() {
  using O = Orientation2D;
  const auto td = AcqSpec::ThreeD();
  auto ax = AcqSpec::TwoD(O::Axial), sa = AcqSpec::TwoD(O::Sagittal), co = AcqSpec::TwoD(O::Coronal);
  return {
      {"1a", ax, ax, ax},
      {"1b", sa, sa, sa},
      {"1c", co, co, co},
      {"2", ax, sa, co},
      {"3", td, ax, ax},
      {"4", td, sa, co},
      {"5", ax, ax, td},
      {"6", sa, co, td},
  };
}

std::vector<RunCell> plan_runs(const std::vector<SubjectFiles>& subjects,
                               const std::vector<ExperimentConfig>& experiments,
                               const std::vector<ResolutionSpec>& resolutions) {
  if (subjects.empty()) throw std::invalid_argument("plan_runs: no subjects");
  if (experiments.empty()) throw std::invalid_argument("plan_runs: no experiments");
  if (resolutions.empty()) throw std::invalid_argument("plan_runs: no resolutions");

  std::vector<std::string> subject_ids;
  for (const auto& s : subjects) subject_ids.push_back(s.id);
  std::sort(subject_ids.begin(), subject_ids.end());

  std::vector<ResolutionSpec> res = resolutions;
  std::stable_sort(res.begin(), res.end(), [](const ResolutionSpec& a, const ResolutionSpec& b) {
    return a.spacing_mm() < b.spacing_mm();
  });

  std::vector<RunCell> cells;
  cells.reserve(subject_ids.size() * experiments.size() * res.size());
  for (const auto& sid : subject_ids)
    for (const auto& exp : experiments)
      for (const auto& r : res) cells.push_back({sid, exp.id, r});
  return cells;
}

void validate(const HarmonizerCmd& cmd) {
  if (cmd.identity) return;
  for (const char* ph : {"{t1w}", "{t2w}", "{flair}"})
    if (cmd.command_template.find(ph) == std::string::npos)
      throw std::invalid_argument(std::string("harmonizer template is missing the ") + ph +
                                  " placeholder");
  if (cmd.targets.empty()) throw std::invalid_argument("harmonizer has no target contrasts");
  if (!(cmd.timeout_s > 0)) throw std::invalid_argument("harmonizer timeout must be positive");
}

std::string expand_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out = tmpl;
  for (const auto& [key, value] : values) {
    const std::string token = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = out.find(token, pos)) != std::string::npos) {
      out.replace(pos, token.size(), value);
      pos += value.size();
    }
  }
  return out;
}

CommandResult run_command(const std::string& command, double timeout_s) {
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);  // may lose the race with the child; either call wins

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  while (true) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw std::runtime_error("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      return {-1, true};
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (WIFEXITED(status)) return {WEXITSTATUS(status), false};
  return {128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0), false};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }

  RunConfig cfg;
  cfg.data_root = j.value("data_root", std::string("."));

  if (!j.contains("subjects") || !j["subjects"].is_object() || j["subjects"].empty())
    throw std::invalid_argument("config needs a non-empty \"subjects\" object");
  for (const auto& [id, paths] : j["subjects"].items()) {
    SubjectFiles s;
    s.id = id;
    for (Contrast c : kContrasts) {
      const std::string key(config_key(c));
      if (!paths.contains(key))
        throw std::invalid_argument("subject " + id + " is missing the " + key + " path");
      std::string p = paths[key].get<std::string>();
      if (!p.empty() && p[0] != '/') p = cfg.data_root + "/" + p;
      s.paths[std::size_t(c)] = p;
    }
    cfg.subjects.push_back(std::move(s));
  }

  if (j.contains("experiments")) {
    cfg.experiments.clear();
    const auto builtins = builtin_experiments();
    for (const auto& e : j["experiments"]) {
      if (e.is_string()) {
        const std::string id = e.get<std::string>();
        const auto it = std::find_if(builtins.begin(), builtins.end(),
                                     [&](const ExperimentConfig& b) { return b.id == id; });
        if (it == builtins.end())
          throw std::invalid_argument("unknown built-in experiment \"" + id + "\"");
        cfg.experiments.push_back(*it);
      } else {
        ExperimentConfig ec;
        ec.id = e.at("id").get<std::string>();
        for (Contrast c : kContrasts) {
          const std::string v = e.at(std::string(config_key(c))).get<std::string>();
          AcqSpec spec;
          if (v == "3D" || v == "3d") {
            spec = AcqSpec::ThreeD();
          } else if (auto o = orientation_from_string(v)) {
            spec = AcqSpec::TwoD(*o);
          } else {
            throw std::invalid_argument("experiment " + ec.id + ": bad acquisition \"" + v + "\"");
          }
          (c == Contrast::T1w ? ec.t1w : c == Contrast::T2w ? ec.t2w : ec.flair) = spec;
        }
        cfg.experiments.push_back(std::move(ec));
      }
    }
    for (std::size_t a = 0; a < cfg.experiments.size(); ++a)
      for (std::size_t b = a + 1; b < cfg.experiments.size(); ++b)
        if (cfg.experiments[a].id == cfg.experiments[b].id)
          throw std::invalid_argument("duplicate experiment id " + cfg.experiments[a].id);
  }

  if (j.contains("resolutions")) {
    cfg.resolutions.clear();
    for (const auto& r : j["resolutions"])
      cfg.resolutions.push_back(ResolutionSpec::parse(r.get<std::string>()));
    if (cfg.resolutions.empty()) throw std::invalid_argument("config \"resolutions\" is empty");
  }

  if (j.contains("harmonizer")) {
    const auto& h = j["harmonizer"];
    cfg.harmonizer.command_template = h.value("template", std::string());
    cfg.harmonizer.timeout_s = h.value("timeout_s", 600.0);
    cfg.harmonizer.exclusive = h.value("exclusive", false);
    cfg.harmonizer.identity = h.value("identity", false);
    if (h.contains("targets")) {
      cfg.harmonizer.targets.clear();
      for (const auto& t : h["targets"]) {
        const auto c = contrast_from_string(t.get<std::string>());
        if (!c) throw std::invalid_argument("bad harmonizer target " + t.get<std::string>());
        cfg.harmonizer.targets.push_back(*c);
      }
    }
  } else {
    cfg.harmonizer.identity = true;
  }

  cfg.output_dir = j.value("output_dir", std::string("anisosim-out"));
  validate(cfg.harmonizer);
  return cfg;
}

const SliceProfile& RunContext::profile_for(double thickness_mm, double dz_mm) {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  const auto key = std::make_pair(thickness_mm, dz_mm);
  auto it = profile_cache_.find(key);
  if (it == profile_cache_.end()) {
    it = profile_cache_
             .emplace(key, normalize_profile(slr_profile(), thickness_mm, dz_mm))
             .first;
  }
  return it->second;
}

namespace {

std::string cell_dirname(const RunCell& cell) {
  std::string res = cell.resolution.str();
  for (auto& ch : res)
    if (ch == '|') ch = '-';
  return cell.subject + "_" + cell.experiment + "_" + res;
}

MetricsRecord score_record(const RunCell& cell, const AcqSpec& acq, Contrast contrast,
                           const Volume3& ref, const Volume3& test) {
  MetricsRecord rec;
  rec.subject = cell.subject;
  rec.experiment = cell.experiment;
  rec.contrast = contrast;
  rec.orientation = acq.orientation_label();
  rec.thickness_mm = cell.resolution.thickness_mm;
  rec.gap_mm = cell.resolution.gap_mm;
  rec.spacing_mm = cell.resolution.spacing_mm();
  rec.psnr_db = psnr(ref, test);
  rec.ssim = ssim(ref, test);
  return rec;
}

}  // namespace

std::vector<MetricsRecord> run_cell(RunContext& ctx, const RunCell& cell) {
  const auto expit = ctx.experiments.find(cell.experiment);
  if (expit == ctx.experiments.end())
    throw std::invalid_argument("unknown experiment " + cell.experiment);
  const ExperimentConfig& exp = expit->second;

  const auto& pristine = ctx.pristine.at(cell.subject);
  const auto& reference = ctx.reference.at(cell.subject);

  // degrade per acquisition assignment, then back onto the reference grid
  std::array<Volume3, 3> inputs;
  for (Contrast c : kContrasts) {
    const AcqSpec& acq = exp.for_contrast(c);
    const Volume3& hr = pristine[std::size_t(c)];
    if (acq.three_d) {
      inputs[std::size_t(c)] = hr;
    } else {
      const int axis = through_plane_axis(acq.orientation);
      const SliceProfile& prof =
          ctx.profile_for(cell.resolution.thickness_mm, hr.spacing[axis]);
      const Volume3 lr = simulate_acquisition(hr, cell.resolution, acq.orientation, prof);
      inputs[std::size_t(c)] = resample_to_grid(lr, hr.dims, hr.spacing[0]);
    }
  }

  std::vector<MetricsRecord> records;
  if (ctx.harmonizer.identity) {
    for (Contrast t : ctx.harmonizer.targets)
      records.push_back(score_record(cell, exp.for_contrast(t), t,
                                     reference[std::size_t(t)], inputs[std::size_t(t)]));
    return records;
  }

  const fs::path dir = fs::path(ctx.scratch_root) / cell_dirname(cell);
  fs::create_directories(dir);
  std::map<std::string, std::string> values;
  for (Contrast c : kContrasts) {
    const fs::path p = dir / ("input_" + std::string(config_key(c)) + ".nii.gz");
    write_nifti(inputs[std::size_t(c)], p.string());
    values[std::string(config_key(c))] = p.string();
  }
  values["outdir"] = dir.string();

  for (Contrast t : ctx.harmonizer.targets) {
    values["target"] = std::string(config_key(t));
    const std::string cmd = expand_template(ctx.harmonizer.command_template, values);
    CommandResult result;
    if (ctx.harmonizer.exclusive) {
      std::lock_guard<std::mutex> lock(ctx.exclusive_mutex());
      result = run_command(cmd, ctx.harmonizer.timeout_s);
    } else {
      result = run_command(cmd, ctx.harmonizer.timeout_s);
    }
    if (result.timed_out)
      throw std::runtime_error("harmonizer timed out after " +
                               fmt_g6(ctx.harmonizer.timeout_s) + " s");
    if (result.exit_code != 0)
      throw std::runtime_error("harmonizer exited with code " +
                               std::to_string(result.exit_code));
    const fs::path outfile = dir / ("harmonized_" + std::string(config_key(t)) + ".nii.gz");
    if (!fs::exists(outfile))
      throw std::runtime_error("harmonizer did not write " + outfile.string());
    const Volume3 harmonized = to_canonical(read_nifti(outfile.string()));
    records.push_back(score_record(cell, exp.for_contrast(t), t,
                                   reference[std::size_t(t)], harmonized));
  }
  fs::remove_all(dir);  // keep scratch only for failed cells
  return records;
}

namespace {

Volume3 load_pristine(const std::string& path) {
  Volume3 v = to_canonical(read_nifti(path));
  return resample_isotropic(v, 1.0);
}

}  // namespace

RunResult execute_plan(const RunConfig& config, int jobs) {
  validate(config.harmonizer);
  const std::vector<RunCell> cells = plan_runs(config.subjects, config.experiments, config.resolutions);

  RunContext ctx;
  ctx.harmonizer = config.harmonizer;
  for (const auto& e : config.experiments) ctx.experiments.emplace(e.id, e);

  const char* tmp_override = std::getenv("ANISOSIM_TMPDIR");
  ctx.scratch_root = tmp_override && *tmp_override
                         ? (fs::path(tmp_override) / "anisosim-scratch").string()
                         : (fs::path(config.output_dir) / "scratch").string();

  RunResult out;
  std::map<std::string, std::string> poisoned;  // subject -> reason

  // load pristine volumes and materialize the all-3D references
  for (const auto& subj : config.subjects) {
    try {
      std::array<Volume3, 3>& vols = ctx.pristine[subj.id];
      for (Contrast c : kContrasts) vols[std::size_t(c)] = load_pristine(subj.path(c));

      std::array<Volume3, 3>& refs = ctx.reference[subj.id];
      if (config.harmonizer.identity) {
        refs = vols;
      } else {
        const fs::path dir = fs::path(config.output_dir) / "reference" / subj.id;
        fs::create_directories(dir);
        std::map<std::string, std::string> values;
        for (Contrast c : kContrasts) {
          const fs::path p = dir / ("input_" + std::string(config_key(c)) + ".nii.gz");
          write_nifti(vols[std::size_t(c)], p.string());
          values[std::string(config_key(c))] = p.string();
        }
        values["outdir"] = dir.string();
        for (Contrast t : config.harmonizer.targets) {
          values["target"] = std::string(config_key(t));
          const std::string cmd = expand_template(config.harmonizer.command_template, values);
          const CommandResult r = run_command(cmd, config.harmonizer.timeout_s);
          if (r.timed_out) throw std::runtime_error("reference harmonization timed out");
          if (r.exit_code != 0)
            throw std::runtime_error("reference harmonization exited with code " +
                                     std::to_string(r.exit_code));
          const fs::path outfile = dir / ("harmonized_" + std::string(config_key(t)) + ".nii.gz");
          if (!fs::exists(outfile))
            throw std::runtime_error("reference harmonization did not write " + outfile.string());
          refs[std::size_t(t)] = to_canonical(read_nifti(outfile.string()));
        }
      }
    } catch (const std::exception& e) {
      poisoned[subj.id] = e.what();
      ctx.pristine.erase(subj.id);
      ctx.reference.erase(subj.id);
    }
  }

  struct Outcome {
    std::vector<MetricsRecord> records;
    std::optional<std::string> failure;
  };
  std::vector<Outcome> outcomes(cells.size());

  if (jobs < 1) jobs = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const RunCell& cell = cells[i];
      const auto p = poisoned.find(cell.subject);
      if (p != poisoned.end()) {
        outcomes[i].failure = p->second;
        continue;
      }
      try {
        outcomes[i].records = run_cell(ctx, cell);
      } catch (const std::exception& e) {
        outcomes[i].failure = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (outcomes[i].failure) {
      out.failures.push_back(
          {cells[i].subject, cells[i].experiment, cells[i].resolution, *outcomes[i].failure});
    } else {
      for (auto& r : outcomes[i].records) out.records.push_back(std::move(r));
    }
  }
  return out;
}

void write_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kResultsHeader << "\n";
  for (const auto& r : records) {
    out << r.subject << ',' << r.experiment << ',' << to_string(r.contrast) << ','
        << r.orientation << ',' << fmt_g6(r.thickness_mm) << ',' << fmt_g6(r.gap_mm) << ','
        << fmt_g6(r.spacing_mm) << ',' << fmt_g6(r.psnr_db) << ',' << fmt_g6(r.ssim) << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

std::vector<MetricsRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader)
    throw std::invalid_argument(path + " does not carry the expected results header");

  std::vector<MetricsRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected 9 columns");
    MetricsRecord r;
    r.subject = f[0];
    r.experiment = f[1];
    const auto c = contrast_from_string(f[2]);
    if (!c) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": bad contrast");
    r.contrast = *c;
    r.orientation = f[3];
    try {
      r.thickness_mm = std::stod(f[4]);
      r.gap_mm = std::stod(f[5]);
      r.spacing_mm = std::stod(f[6]);
      r.psnr_db = f[7] == "inf" ? std::numeric_limits<double>::infinity() : std::stod(f[7]);
      r.ssim = std::stod(f[8]);
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": bad numeric field");
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_failures_csv(const std::vector<CellFailure>& failures, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "subject,experiment,thickness_mm,gap_mm,spacing_mm,reason\n";
  for (const auto& f : failures) {
    out << f.subject << ',' << f.experiment << ',' << fmt_g6(f.resolution.thickness_mm) << ','
        << fmt_g6(f.resolution.gap_mm) << ',' << fmt_g6(f.resolution.spacing_mm()) << ','
        << csv_quote(f.reason) << "\n";
  }
}

namespace {

MetricSummary five_number(std::vector<double> v) {
  MetricSummary s;
  s.n = int(v.size());
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double h = (v.size() - 1) * p;
    const std::size_t lo = std::size_t(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
  };
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records) {
  struct Key {
    std::string experiment;
    Contrast contrast;
    double thickness, gap;
    bool operator<(const Key& o) const {
      if (experiment != o.experiment) return experiment < o.experiment;
      if (contrast != o.contrast) return contrast < o.contrast;
      if (thickness != o.thickness) return thickness < o.thickness;
      return gap < o.gap;
    }
  };
  std::map<Key, std::vector<const MetricsRecord*>> groups;
  for (const auto& r : records)
    groups[{r.experiment, r.contrast, r.thickness_mm, r.gap_mm}].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, recs] : groups) {
    SummaryRow row;
    row.experiment = key.experiment;
    row.contrast = key.contrast;
    row.resolution = {key.thickness, key.gap};
    row.n = int(recs.size());
    std::vector<double> psnr_vals, ssim_vals;
    for (const auto* r : recs) {
      if (std::isinf(r->psnr_db)) ++row.psnr_inf_count;
      else psnr_vals.push_back(r->psnr_db);
      ssim_vals.push_back(r->ssim);
    }
    row.psnr = five_number(std::move(psnr_vals));
    row.ssim = five_number(std::move(ssim_vals));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "experiment,contrast,thickness_mm,gap_mm,spacing_mm,n,psnr_inf_count,"
         "psnr_median,psnr_q1,psnr_q3,psnr_min,psnr_max,"
         "ssim_median,ssim_q1,ssim_q3,ssim_min,ssim_max\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << to_string(r.contrast) << ','
        << fmt_g6(r.resolution.thickness_mm) << ',' << fmt_g6(r.resolution.gap_mm) << ','
        << fmt_g6(r.resolution.spacing_mm()) << ',' << r.n << ',' << r.psnr_inf_count;
    if (r.psnr.n > 0) {
      out << ',' << fmt_g6(r.psnr.median) << ',' << fmt_g6(r.psnr.q1) << ','
          << fmt_g6(r.psnr.q3) << ',' << fmt_g6(r.psnr.min) << ',' << fmt_g6(r.psnr.max);
    } else {
      out << ",,,,,";  // all-inf group: psnr summary omitted
    }
    out << ',' << fmt_g6(r.ssim.median) << ',' << fmt_g6(r.ssim.q1) << ',' << fmt_g6(r.ssim.q3)
        << ',' << fmt_g6(r.ssim.min) << ',' << fmt_g6(r.ssim.max) << "\n";
  }
}

}  // namespace anisosim
