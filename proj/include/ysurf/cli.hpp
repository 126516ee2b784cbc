#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ysurf/classify.hpp"
#include "ysurf/spectra.hpp"

namespace ysurf {

/// One run of the pipeline. `R_list` holds truncation values in the family's
/// own parameter: half-height (catenoid), catenary u (ycatenoid), extent (flat).
struct RunConfig {
  std::string surface = "ycatenoid";  // plane | catenoid | flat_ycone | ycatenoid | file:<path>
  double neck_radius = 1.0;           // --r0 (ycatenoid junction radius) / --a (catenoid waist)
  double half_height = 3.0;
  double truncation_u = 3.0;
  double extent = 1.0;
  double junction_length = 1.0;
  double h = 0.03;
  int angular = 0;
  std::vector<double> R_list;
  std::vector<double> cutoff_R{10.0, 100.0};
  int eigen_count = 5;
  int fourier_cap = 10;
  double zero_tolerance = 0.0;  // 0: automatic
  double angle_tol_deg = 1.0;
  std::string out;
  std::string constants_out;
  std::string theta_file;
  int threads = 1;

  /// Throws ArgumentError on nonpositive sizes/tolerances or a non-increasing R_list.
  void validate() const;
  bool is_file() const { return surface.rfind("file:", 0) == 0; }
  double default_truncation() const;
};

/// Exit codes: mathematical verdicts are successes.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitStructural = 2,
  kExitArgument = 3,
  kExitSpectral = 4,
};

YSurface build_surface(const RunConfig& config, std::optional<double> truncation = std::nullopt);
SurfaceFamily surface_family(const RunConfig& config);

/// Worker count: the --threads flag when given, else YSURF_THREADS, else 1.
int resolve_threads(std::optional<int> flag);

nlohmann::json surface_summary(const YSurface& surface, const RunConfig& config);
nlohmann::json spectrum_json(const SpectrumResult& r);
nlohmann::json theta_json(const ThetaReport& report);
nlohmann::json verdict_json(const Verdict& v);

/// Subcommands. Each writes its primary artifact to `out` (or to config.out) and
/// diagnostics to `err`, and returns the process exit code.
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_index(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Report documents behind cmd_index / cmd_classify (no I/O).
nlohmann::json index_report(const RunConfig& config);
nlohmann::json classify_report(const RunConfig& config);

struct CheckItem {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string bound;
  std::string detail;
};

/// Invariant suites of every module at the configured mesh size.
std::vector<CheckItem> verify_suite(const RunConfig& config);

/// Full command line: parses, dispatches and maps exceptions to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// JSON text with a trailing newline.
std::string to_document(const nlohmann::json& j);

}  // namespace ysurf
