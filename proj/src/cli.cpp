#include "sceig/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sceig/bench.hpp"
#include "sceig/errors.hpp"
#include "sceig/io.hpp"
#include "sceig/log.hpp"
#include "sceig/solvers.hpp"
#include "sceig/toy.hpp"

namespace sceig {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitInput = 2;

struct SolveOptions {
  std::string file;
  std::string method = "scgled";
  std::string accel = "damping";
  std::string scf_accel = "vanilla";
  std::string init;
  std::string trace_out;
  std::string report_out;
  SolverConfig config;
};

const std::map<std::string, Method> kMethods = {{"scgled", Method::scgled},
                                                {"scf", Method::scf},
                                                {"hybrid", Method::hybrid},
                                                {"scgled-vanilla", Method::scgled_vanilla}};
const std::map<std::string, Acceleration> kAccels = {{"vanilla", Acceleration::vanilla},
                                                     {"damping", Acceleration::damping},
                                                     {"diis", Acceleration::diis}};
const std::map<std::string, InitGuess> kInits = {{"identity", InitGuess::identity_block},
                                                 {"random", InitGuess::seeded_random},
                                                 {"hcore", InitGuess::hcore}};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || item.front() == '-')
      throw InvalidConfig("bad list entry '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw InvalidConfig("empty list");
  return out;
}

void print_summary(const ConvergenceReport& r, const Problem& p) {
  std::cout << "problem " << p.label() << " (n_basis " << p.n_basis() << ", k " << p.k() << ")\n";
  std::cout << "method " << to_string(r.method) << "\n";
  std::cout << "total_energy " << format_real(r.total_energy) << "\n";
  if (r.energy_error) std::cout << "energy_error " << fmt("%.3e", *r.energy_error) << "\n";
  std::cout << "residual " << fmt("%.3e", r.residual) << "\n";
  std::cout << "iterations " << r.iterations_used << " scf_iterations " << r.scf_iterations_used << "\n";
  std::cout << "converged " << (r.converged ? "yes" : "no") << "\n";
  std::cout << "wall_ms " << fmt("%.3f", r.wall_time.count()) << "\n";
}

int cmd_solve(const SolveOptions& o) {
  SolverConfig c = o.config;
  c.method = kMethods.at(o.method);
  c.accel = kAccels.at(o.accel);
  c.scf_accel = kAccels.at(o.scf_accel);
  if (!o.init.empty())
    c.init = kInits.at(o.init);
  else if (c.method == Method::scf)
    c.init = InitGuess::hcore;
  validate_config(c);

  const Problem problem = read_problem_file(o.file);
  const ConvergenceReport r = solve(problem, c);
  if (!o.report_out.empty()) write_text_file(o.report_out, report_json(r, problem, c));
  if (!o.trace_out.empty()) write_text_file(o.trace_out, trace_csv(r, problem));
  for (const auto& w : r.warnings) log_warning(w);
  print_summary(r, problem);
  return r.converged ? kExitOk : kExitNotConverged;
}

int cmd_bench(const std::string& dir, const std::string& grid, const std::string& out,
              const std::string& summary_out, bool append, std::size_t threads) {
  const std::vector<BenchCell> cells = parse_grid(grid);
  std::vector<Problem> problems;
  for (const auto& path : problem_files(dir)) problems.push_back(read_problem_file(path));
  if (problems.empty()) throw EmptyInput("no problem files in " + dir);

  const std::vector<BenchRow> rows = run_bench(problems, cells, threads);
  std::error_code ec;
  const bool has_content = append && std::filesystem::exists(out, ec) &&
                           std::filesystem::file_size(out, ec) > 0;
  if (append) {
    std::ofstream f(out, std::ios::app | std::ios::binary);
    if (!f) throw InputError("cannot write " + out);
    f << bench_csv(rows, !has_content);
  } else {
    write_text_file(out, bench_csv(rows));
  }
  if (!summary_out.empty()) write_text_file(summary_out, curves_csv(bench_curves(rows)));
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.converged ? 0 : 1;
  std::cout << rows.size() << " rows (" << problems.size() << " problems x " << cells.size()
            << " cells), " << failed << " not converged, written to " << out << "\n";
  return kExitOk;
}

int cmd_sweep_if(const std::string& file, std::size_t t, const std::string& values,
                 const std::string& out, const std::string& method) {
  const Problem problem = read_problem_file(file);
  std::vector<BenchCell> cells;
  const BenchMethod m = parse_bench_method(method);
  for (std::size_t i_f : parse_size_list(values)) {
    BenchCell cell{m, t, i_f, 1e-2, Acceleration::damping, false};
    validate_config(cell_config(cell));
    cells.push_back(cell);
  }
  const std::vector<BenchRow> rows = run_bench({problem}, cells);
  if (!out.empty()) write_text_file(out, bench_csv(rows));
  std::cout << "i_f,T,energy_error,total_energy\n";
  for (const auto& r : rows)
    std::cout << r.i_f << "," << r.t << ","
              << (r.energy_error ? format_real(*r.energy_error) : std::string()) << ","
              << format_real(r.total_energy) << "\n";
  return kExitOk;
}

struct ToyCheck {
  std::string name;
  double value;
  double expected;
  double tol;
  bool ok() const { return std::abs(value - expected) <= tol; }
};

// Golden checks shared by every method; sign of each eigenvector is free.
std::vector<ToyCheck> toy_checks(const Problem& toy, const ConvergenceReport& r) {
  namespace g = toy_golden;
  Matrix v = r.v_star;
  if (v(0, 0) < 0) v = -v;
  const Matrix f = fock(toy, density(v));
  const Orthogonalizer x(toy.overlap_spectrum());
  const EigenDecomposition eig = sym_eig(x.to_orthonormal(f));
  Vector v2 = x.back_transform(eig.eigenvectors.col(1));
  if (v2(0) < 0) v2 = -v2;
  return {
      {"v_star[0]", v(0, 0), g::v_entry, 1e-3},
      {"v_star[1]", v(1, 0), g::v_entry, 1e-3},
      {"lambda1", r.eigenvalues(0), g::lambda1, 5e-4},
      {"F[0,0]", f(0, 0), g::f_diag, 2e-4},
      {"F[0,1]", f(0, 1), g::f_offdiag, 2e-4},
      {"F[1,0]", f(1, 0), g::f_offdiag, 2e-4},
      {"F[1,1]", f(1, 1), g::f_diag, 2e-4},
      {"lambda2", eig.eigenvalues(1), g::lambda2, 5e-4},
      {"v2[0]", v2(0), g::v2_entry, 5e-4},
      {"v2[1]", v2(1), -g::v2_entry, 5e-4},
  };
}

int cmd_verify_toy(const std::string& report_out) {
  const Problem toy = toy_problem();
  struct Run {
    const char* name;
    SolverConfig config;
  };
  std::vector<Run> runs;
  {
    SolverConfig c;
    c.method = Method::scgled;
    c.t_max = 20000;
    runs.push_back({"scgled", c});
    c.method = Method::hybrid;
    c.t_max = 1000;
    runs.push_back({"hybrid", c});
    c.method = Method::scf;
    c.init = InitGuess::hcore;
    runs.push_back({"scf", c});
    SolverConfig v;
    v.method = Method::scgled_vanilla;
    v.t_max = 20000;
    runs.push_back({"scgled-vanilla", v});
  }

  bool all_ok = true;
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const Run& run : runs) {
    const ConvergenceReport r = solve(toy, run.config);
    bool ok = r.converged;
    std::cout << run.name << ": V* = (" << fmt("%.6f", r.v_star(0, 0)) << ", "
              << fmt("%.6f", r.v_star(1, 0)) << ")  lambda1 = " << fmt("%.6f", r.eigenvalues(0))
              << "  converged " << (r.converged ? "yes" : "no") << "\n";
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const ToyCheck& c : toy_checks(toy, r)) {
      ok = ok && c.ok();
      std::cout << "  " << (c.ok() ? "ok   " : "FAIL ") << c.name << " = " << fmt("%.6f", c.value)
                << " (expected " << fmt("%.4f", c.expected) << " +- " << fmt("%.0e", c.tol) << ")\n";
      checks.push_back({{"name", c.name}, {"value", c.value}, {"ok", c.ok()}});
    }
    std::cout << "  wall_ms " << fmt("%.3f", r.wall_time.count()) << "\n";
    all_ok = all_ok && ok;
    nlohmann::ordered_json entry = nlohmann::ordered_json::parse(report_json(r, toy, run.config));
    entry["golden_checks"] = std::move(checks);
    doc.push_back(std::move(entry));
  }
  if (!report_out.empty()) write_text_file(report_out, doc.dump(2) + "\n");
  std::cout << (all_ok ? "verify-toy: PASS" : "verify-toy: FAIL") << "\n";
  return all_ok ? kExitOk : kExitNotConverged;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Self-consistent generalized eigenproblem solvers"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem file");
  solve_cmd->add_option("file", so.file, "Problem file")->required();
  solve_cmd->add_option("--method", so.method)->check(CLI::IsMember({"scgled", "scf", "hybrid", "scgled-vanilla"}));
  solve_cmd->add_option("--eta", so.config.eta);
  solve_cmd->add_option("--alpha", so.config.alpha);
  solve_cmd->add_option("--beta", so.config.beta);
  solve_cmd->add_option("--t", so.config.t_max, "Gradient-loop iterations");
  solve_cmd->add_option("--i-f", so.config.i_f, "Iterations between Fock updates");
  solve_cmd->add_option("--accel", so.accel)->check(CLI::IsMember({"vanilla", "damping", "diis"}));
  solve_cmd->add_option("--scf-accel", so.scf_accel)->check(CLI::IsMember({"vanilla", "damping", "diis"}));
  solve_cmd->add_option("--diis-tail", so.config.diis_tail_fraction, "Fraction of T run with DIIS");
  solve_cmd->add_option("--energy-tol", so.config.energy_tol);
  solve_cmd->add_option("--density-tol", so.config.density_tol);
  solve_cmd->add_option("--max-scf", so.config.scf_max_iters);
  solve_cmd->add_option("--init", so.init)->check(CLI::IsMember({"identity", "random", "hcore"}));
  solve_cmd->add_option("--seed", so.config.seed);
  solve_cmd->add_flag("--early-stop", so.config.early_stop);
  solve_cmd->add_option("--trace-out", so.trace_out);
  solve_cmd->add_option("--report-out", so.report_out);

  std::string bench_dir, grid = "default", bench_out = "bench.csv", summary_out;
  bool append = false;
  std::size_t threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run a grid over every problem file in a directory");
  bench_cmd->add_option("dir", bench_dir)->required();
  bench_cmd->add_option("--grid", grid, "default, full, or key=v,v;key=v");
  bench_cmd->add_option("--out", bench_out);
  bench_cmd->add_option("--summary-out", summary_out);
  bench_cmd->add_flag("--append", append);
  bench_cmd->add_option("--threads", threads, "0: SCEIG_THREADS or hardware concurrency");

  std::string sweep_file, if_values = "10,50,500", sweep_out, sweep_method = "hybrid";
  std::size_t sweep_t = 5000;
  auto* sweep_cmd = app.add_subcommand("sweep-if", "Energy error against the Fock update interval");
  sweep_cmd->add_option("file", sweep_file)->required();
  sweep_cmd->add_option("--t", sweep_t);
  sweep_cmd->add_option("--if-values", if_values);
  sweep_cmd->add_option("--out", sweep_out);
  sweep_cmd->add_option("--method", sweep_method)->check(CLI::IsMember({"hybrid", "scgled"}));

  std::string toy_report;
  auto* toy_cmd = app.add_subcommand("verify-toy", "Run the built-in two-orbital instance and check it");
  toy_cmd->add_option("--report-out", toy_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(so);
    if (*bench_cmd) return cmd_bench(bench_dir, grid, bench_out, summary_out, append, threads);
    if (*sweep_cmd) return cmd_sweep_if(sweep_file, sweep_t, if_values, sweep_out, sweep_method);
    if (*toy_cmd) return cmd_verify_toy(toy_report);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  }
  return kExitInput;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace sceig
