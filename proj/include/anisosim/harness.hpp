#pragma once

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "anisosim/degrade.hpp"
#include "anisosim/volume.hpp"

namespace anisosim {

enum class Contrast { T1w, T2w, Flair };
constexpr std::array<Contrast, 3> kContrasts = {Contrast::T1w, Contrast::T2w, Contrast::Flair};

std::string_view to_string(Contrast c);                       // "T1w" / "T2w" / "FLAIR"
std::string_view config_key(Contrast c);                      // "t1w" / "t2w" / "flair"
std::optional<Contrast> contrast_from_string(std::string_view s);

/// How one contrast enters a run: a pristine 3D acquisition, or a simulated
/// 2D stack in one orientation (the resolution comes from the run cell).
struct AcqSpec {
  bool three_d = false;
  Orientation2D orientation = Orientation2D::Axial;

  static AcqSpec ThreeD() { return {true, Orientation2D::Axial}; }
  static AcqSpec TwoD(Orientation2D o) { return {false, o}; }
  std::string orientation_label() const;  // "3D" or the orientation name
};

bool operator==(const AcqSpec& a, const AcqSpec& b);

/// One row of the experiment table: per-contrast acquisition assignment.
struct ExperimentConfig {
  std::string id;
  AcqSpec t1w, t2w, flair;

  const AcqSpec& for_contrast(Contrast c) const {
    switch (c) {
      case Contrast::T1w: return t1w;
      case Contrast::T2w: return t2w;
      default: return flair;
    }
  }
};

/// The built-in eight experiment configurations, in order:
/// 1a/1b/1c all-2D same orientation, 2 all-2D mixed, 3/4 3D T1w,
/// 5/6 3D FLAIR.
std::vector<ExperimentConfig> builtin_experiments();

struct SubjectFiles {
  std::string id;
  std::array<std::string, 3> paths;  // indexed by Contrast
  const std::string& path(Contrast c) const { return paths[std::size_t(c)]; }
};

struct RunCell {
  std::string subject;
  std::string experiment;
  ResolutionSpec resolution;
};

/// Cartesian product subject x experiment x resolution, ordered by subject
/// id ascending, experiment list order, then spacing ascending (ties keep
/// the given resolution order).
std::vector<RunCell> plan_runs(const std::vector<SubjectFiles>& subjects,
                               const std::vector<ExperimentConfig>& experiments,
                               const std::vector<ResolutionSpec>& resolutions);

/// External harmonizer adapter. The command template expands {t1w} {t2w}
/// {flair} {outdir} and optionally {target}; the command must write
/// <outdir>/harmonized_<contrast>.nii.gz and exit 0. Identity mode bypasses
/// the command and uses the requested input contrast as the output.
struct HarmonizerCmd {
  std::string command_template;
  double timeout_s = 600.0;
  bool exclusive = false;  // serialize invocations (e.g. one GPU)
  bool identity = false;
  std::vector<Contrast> targets = {Contrast::T1w, Contrast::T2w, Contrast::Flair};
};

/// Throws std::invalid_argument unless identity mode is on or the template
/// contains all three input placeholders.
void validate(const HarmonizerCmd& cmd);

struct MetricsRecord {
  std::string subject;
  std::string experiment;
  Contrast contrast = Contrast::T1w;
  std::string orientation;  // "axial" / "sagittal" / "coronal" / "3D"
  double thickness_mm = 0.0;
  double gap_mm = 0.0;
  double spacing_mm = 0.0;
  double psnr_db = 0.0;  // +inf when the test equals the reference
  double ssim = 0.0;
};

struct CellFailure {
  std::string subject;
  std::string experiment;
  ResolutionSpec resolution;
  std::string reason;
};

struct RunConfig {
  std::string data_root = ".";
  std::vector<SubjectFiles> subjects;
  std::vector<ExperimentConfig> experiments = builtin_experiments();
  std::vector<ResolutionSpec> resolutions = default_resolutions();
  HarmonizerCmd harmonizer;
  std::string output_dir = "anisosim-out";
};

/// Parses the JSON run configuration; see README for the schema.
RunConfig load_config(const std::string& path);

struct RunResult {
  std::vector<MetricsRecord> records;
  std::vector<CellFailure> failures;
};

/// Shared state for run_cell: pristine canonical volumes on the 1 mm
/// reference grid, the per-subject all-3D harmonized references, the
/// harmonizer adapter and a slice-profile cache. Immutable while cells run,
/// so cells may execute concurrently.
class RunContext {
 public:
  HarmonizerCmd harmonizer;
  std::map<std::string, ExperimentConfig> experiments;
  std::map<std::string, std::array<Volume3, 3>> pristine;
  std::map<std::string, std::array<Volume3, 3>> reference;
  std::string scratch_root = ".";

  const SliceProfile& profile_for(double thickness_mm, double dz_mm);
  std::mutex& exclusive_mutex() { return exclusive_mutex_; }

 private:
  std::mutex exclusive_mutex_;
  std::mutex cache_mutex_;
  std::map<std::pair<double, double>, SliceProfile> profile_cache_;
};

/// Degrades each contrast per the experiment's acquisition assignment,
/// resamples everything back onto the subject's 1 mm reference grid, runs
/// the harmonizer once per target contrast and scores against the all-3D
/// reference. Throws on harmonizer failure or timeout; execute_plan turns
/// that into a CellFailure.
std::vector<MetricsRecord> run_cell(RunContext& ctx, const RunCell& cell);

/// Materializes the all-3D references, then executes every cell on a bounded
/// worker pool. Failed cells are recorded and never abort the run.
RunResult execute_plan(const RunConfig& config, int jobs);

/// results.csv with the pinned header, 6 significant digits, LF endings.
void write_csv(const std::vector<MetricsRecord>& records, const std::string& path);
std::vector<MetricsRecord> read_csv(const std::string& path);
void write_failures_csv(const std::vector<CellFailure>& failures, const std::string& path);

/// Five-number summary of one metric within a group; `n` excludes infinite
/// values (tracked separately on the row).
struct MetricSummary {
  int n = 0;
  double median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;
};

struct SummaryRow {
  std::string experiment;
  Contrast contrast = Contrast::T1w;
  ResolutionSpec resolution;
  int n = 0;             // records in the group
  int psnr_inf_count = 0;
  MetricSummary psnr;    // finite PSNR values only
  MetricSummary ssim;
};

/// Groups records by (experiment, contrast, resolution) and computes
/// box-plot five-number summaries with linear-interpolation quantiles.
std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

/// Expands {t1w} {t2w} {flair} {outdir} {target} in a command template.
std::string expand_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values);

struct CommandResult {
  int exit_code = 0;
  bool timed_out = false;
};

/// Runs a shell command with a wall-clock timeout; the whole process group
/// is killed on expiry.
CommandResult run_command(const std::string& command, double timeout_s);

}  // namespace anisosim
