#include "common.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include "scipi/error.hpp"

namespace scipi::cli {

namespace {

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SCIPI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = static_cast<unsigned>(v);
  }
  return cap;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
  if (!file) throw InputError("failed writing '" + path + "'");
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_export(const std::vector<TrialOutput>& trials) {
  std::vector<std::string> columns;
  for (const auto& t : trials) {
    const auto& rows = t.record["iterations"];
    if (!rows.empty()) {
      for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
        columns.push_back(it.key());
      }
      break;
    }
  }
  std::string out = "run_id";
  for (const auto& c : columns) out += "," + c;
  out += '\n';
  for (const auto& t : trials) {
    const std::string id = t.record["run_id"].get<std::string>();
    for (const auto& row : t.record["iterations"]) {
      out += id;
      for (const auto& c : columns) out += "," + (row.contains(c) ? csv_cell(row[c]) : "");
      out += '\n';
    }
  }
  return out;
}

}  // namespace

std::vector<TrialOutput> run_trials(int repeats, std::uint64_t seed,
                                    const std::function<TrialOutput(std::uint64_t)>& trial) {
  if (repeats < 1) throw ConfigError("--repeats must be at least 1");
  const auto n = static_cast<std::size_t>(repeats);
  std::vector<TrialOutput> outputs(n);
  std::vector<std::exception_ptr> failures(n);
  const unsigned workers = std::min<unsigned>(thread_cap(), static_cast<unsigned>(repeats));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outputs[i] = trial(seed + i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return outputs;
}

int emit(const CommonOptions& opts, const std::string& command,
         const std::vector<TrialOutput>& trials, const Json& extra, std::ostream& out,
         std::ostream& err) {
  Json doc;
  doc["schema"] = kTraceSchema;
  doc["command"] = command;
  doc["runs"] = Json::array();
  for (const auto& t : trials) doc["runs"].push_back(t.record);
  if (extra.is_object()) {
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  }
  const std::string text = dump_json(doc);

  if (opts.out == "-" && opts.csv == "-") throw ConfigError("--out and --csv cannot both be '-'");
  std::ostream& summary = opts.out == "-" || opts.csv == "-" ? err : out;
  for (const auto& t : trials) summary << t.summary << '\n';
  if (opts.out == "-") {
    out << text;
  } else if (!opts.out.empty()) {
    write_text_file(opts.out, text);
  }
  if (opts.csv == "-") {
    out << csv_export(trials);
  } else if (!opts.csv.empty()) {
    write_text_file(opts.csv, csv_export(trials));
  }

  int code = kConverged;
  for (const auto& t : trials) code = std::max(code, t.exit_code);
  return code;
}

Matrix load_data(const CommonOptions& opts) {
  const std::string& path = opts.data;
  const bool mtx = path.size() >= 4 && path.compare(path.size() - 4, 4, ".mtx") == 0;
  return mtx ? load_matrix_market(path) : load_dense_csv(path, opts.header);
}

DatasetSpec dataset_spec(const CommonOptions& opts, std::uint64_t seed,
                         const std::vector<std::string>& allowed) {
  DatasetSpec spec = DatasetSpec::parse(opts.gen, seed);
  if (std::find(allowed.begin(), allowed.end(), spec.generator) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw InputError("generator '" + spec.generator + "' not available here (expected " + list +
                     ")");
  }
  return spec;
}

int exit_code_for(StopReason reason) {
  switch (reason) {
    case StopReason::XTol:
    case StopReason::FTol:
      return kConverged;
    case StopReason::MaxIter:
      return kMaxIter;
    case StopReason::ZeroGradient:
      return kZeroGradient;
  }
  return kMaxIter;
}

Json config_json(const SolverConfig& c) {
  Json j;
  j["max_iter"] = c.max_iter;
  j["x_tol"] = c.x_tol;
  j["f_ref"] = c.f_ref ? Json(*c.f_ref) : Json(nullptr);
  j["f_tol"] = c.f_tol;
  j["shift"] = c.shift;
  j["step"] = c.step ? Json(*c.step) : Json(nullptr);
  j["seed"] = c.seed;
  j["block_order"] = c.block_order == BlockOrder::Jacobi ? "jacobi" : "gauss-seidel";
  return j;
}

Json vector_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Json rate_json(const RateReport& r) {
  Json j;
  j["lambda_star"] = r.lambda_star;
  j["lambda_bar_2"] = r.lambda_bar_2;
  j["rho_predicted"] = r.rho_predicted;
  j["rho_empirical"] = r.rho_empirical ? Json(*r.rho_empirical) : Json(nullptr);
  j["ratio"] = r.rho_empirical && r.condition_ok ? Json(*r.rho_empirical / r.rho_predicted)
                                                 : Json(nullptr);
  j["condition_ok"] = r.condition_ok;
  j["kkt_residual"] = r.kkt_residual;
  j["eigenvalues"] = vector_json(r.eigenvalues);
  return j;
}

Json block_rate_json(const BlockRateReport& r) {
  Json j;
  j["lambda_star"] = r.lambda_star;
  j["lambda_bar_2"] = r.lambda_bar_2;
  j["s_star"] = r.s_star;
  j["s_bar_2"] = r.s_bar_2;
  j["nu"] = r.nu;
  j["rho_predicted"] = r.rho;
  j["rho_eigensolver"] = r.rho_eigensolver;
  j["rho_empirical"] = r.rho_empirical ? Json(*r.rho_empirical) : Json(nullptr);
  j["ratio"] = r.rho_empirical && r.coupling_condition_ok ? Json(*r.rho_empirical / r.rho)
                                                          : Json(nullptr);
  j["condition_ok"] = r.condition_ok;
  j["coupling_condition_ok"] = r.coupling_condition_ok;
  return j;
}

Json solve_record(const std::string& run_id, const Json& problem, const std::string& solver,
                  const SolverConfig& config, const SolveResult& result) {
  Json rec;
  rec["run_id"] = run_id;
  rec["problem"] = problem;
  rec["solver"] = solver;
  rec["config"] = config_json(config);
  Json rows = Json::array();
  for (std::size_t k = 0; k < result.objective_trace.size(); ++k) {
    Json row;
    row["k"] = k;
    row["f"] = result.objective_trace[k];
    row["step"] = k == 0 ? Json(nullptr) : Json(result.step_trace[k - 1]);
    if (!result.alignment_trace.empty()) row["alignment"] = result.alignment_trace[k];
    if (!result.alignment_trace_y.empty()) row["alignment_y"] = result.alignment_trace_y[k];
    rows.push_back(row);
  }
  rec["iterations"] = rows;
  Json summary;
  summary["converged"] = result.converged;
  summary["iterations"] = result.iterations;
  summary["stop_reason"] = to_string(result.stop_reason);
  summary["final_objective"] = result.objective_trace.back();
  summary["best_objective"] = result.best_objective;
  summary["final_x"] = vector_json(result.final_x);
  if (result.final_y) summary["final_y"] = vector_json(*result.final_y);
  rec["summary"] = summary;
  return rec;
}

void add_wall_time(Json& record, double seconds, bool timing) {
  if (timing) record["summary"]["wall_time_s"] = seconds;
}

std::string format_g(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double timed(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start);
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

}  // namespace scipi::cli
