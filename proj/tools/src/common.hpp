#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scipi/analysis.hpp"
#include "scipi/data_io.hpp"
#include "scipi/solvers.hpp"
#include "scipi_cli/cli.hpp"

namespace scipi::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kTraceSchema = "scipi.trace/1";

/// Flags shared by every command that writes a trace.
struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  bool timing = false;
  int repeats = 1;
  std::string gen;
  std::string data;
  bool header = false;
};

/// Result of one seeded trial of a command.
struct TrialOutput {
  Json record;
  int exit_code = kConverged;
  std::string summary;
};

/// Runs `trial(seed + i)` for i < repeats, concurrently when allowed by
/// SCIPI_THREADS (default: hardware concurrency). Outputs are ordered by trial
/// index; the first failure (by index) is rethrown.
std::vector<TrialOutput> run_trials(int repeats, std::uint64_t seed,
                                    const std::function<TrialOutput(std::uint64_t)>& trial);

/// Writes the trace document (to --out, "-" for stdout), the optional CSV
/// export and the summary lines. Returns the most severe trial exit code.
int emit(const CommonOptions& opts, const std::string& command, const std::vector<TrialOutput>& trials,
         const Json& extra, std::ostream& out, std::ostream& err);

/// Data matrix from --data (Matrix Market when the name ends in .mtx, CSV otherwise).
Matrix load_data(const CommonOptions& opts);

/// Parses --gen with the trial seed; throws InputError for a generator not in `allowed`.
DatasetSpec dataset_spec(const CommonOptions& opts, std::uint64_t seed,
                         const std::vector<std::string>& allowed);

int exit_code_for(StopReason reason);

Json config_json(const SolverConfig& config);
Json vector_json(const Vector& v);
Json rate_json(const RateReport& report);
Json block_rate_json(const BlockRateReport& report);

/// Per-iteration rows (k, f, step, alignment...) and summary for a sphere solve.
Json solve_record(const std::string& run_id, const Json& problem, const std::string& solver,
                  const SolverConfig& config, const SolveResult& result);

void add_wall_time(Json& record, double seconds, bool timing);

std::string format_g(double v, int digits = 6);

/// Wall-clock seconds spent in `fn`.
double timed(const std::function<void()>& fn);

struct SolveOptions {
  CommonOptions common;
  std::string problem;
  std::string solver = "sci-pi";
  double p = 4.0;
  double shift = 0.0;
  int max_iter = 10000;
  double x_tol = 1e-8;
  std::optional<double> f_ref;
  double f_tol = 1e-6;
  bool rate = false;
  int column = 0;
};

struct NmfCommandOptions {
  CommonOptions common;
  int rank = 0;
  std::string methods = "mu,pgd,sci-pi";
  int max_iter = 500;
  double sigma = 1.0;
};

struct GmmCommandOptions {
  CommonOptions common;
  int components = 0;
  std::string methods = "em,sci-pi";
  int max_iter = 1000;
  double x_tol = 1e-8;
  double alpha = 1.0;
  double cov_floor = 1e-6;
};

struct IcaCommandOptions {
  CommonOptions common;
  std::string methods = "fastica,sci-pi";
  int max_iter = 1000;
  double x_tol = 1e-8;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  bool json = false;
  std::string out;
  double perturb_grad = 0.0;
};

struct RateOptions {
  CommonOptions common;
  std::string problem;
  double p = 4.0;
  double shift = 0.0;
  int max_iter = 100000;
  double x_tol = 1e-13;
  /// Coupling strength for the synthetic block and partial problems.
  double nu = 0.05;
  double mu = 1.0;
  double lipschitz = 2.0;
};

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_rate(const RateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_nmf(const NmfCommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_gmm(const GmmCommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_ica(const IcaCommandOptions& opts, std::ostream& out, std::ostream& err);

/// Splits "a,b,c" into its non-empty items.
std::vector<std::string> split_list(const std::string& text);

}  // namespace scipi::cli
