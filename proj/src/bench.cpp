#include "sceig/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "sceig/errors.hpp"
#include "sceig/io.hpp"

namespace sceig {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t to_size(const std::string& s, const char* what) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || s.front() == '-')
    throw InvalidConfig(std::string("bad ") + what + " value '" + s + "'");
  return static_cast<std::size_t>(v);
}

double to_real(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw InvalidConfig(std::string("bad ") + what + " value '" + s + "'");
  return v;
}

Acceleration parse_accel(const std::string& s) {
  if (s == "vanilla") return Acceleration::vanilla;
  if (s == "damping") return Acceleration::damping;
  if (s == "diis") return Acceleration::diis;
  throw InvalidConfig("unknown acceleration '" + s + "'");
}

bool fixed_start(BenchMethod m) { return m == BenchMethod::hcore || m == BenchMethod::scf; }

const std::vector<std::size_t> kDefaultT = {200, 1000, 2000, 5000, 10000};

std::size_t env_threads() {
  if (const char* env = std::getenv("SCEIG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(BenchMethod method) noexcept {
  switch (method) {
    case BenchMethod::hcore:
      return "hcore";
    case BenchMethod::hybrid:
      return "hybrid";
    case BenchMethod::scgled:
      return "scgled";
    case BenchMethod::scgled_vanilla:
      return "scgled-vanilla";
    case BenchMethod::scf:
      return "scf";
  }
  return "unknown";
}

BenchMethod parse_bench_method(std::string_view name) {
  for (BenchMethod m : {BenchMethod::hcore, BenchMethod::hybrid, BenchMethod::scgled,
                        BenchMethod::scgled_vanilla, BenchMethod::scf})
    if (to_string(m) == name) return m;
  throw InvalidConfig("unknown bench method '" + std::string(name) + "'");
}

std::vector<BenchCell> parse_grid(std::string_view grid) {
  const std::string s = trim(grid);
  std::vector<BenchMethod> methods;
  std::vector<std::size_t> ts;
  std::vector<std::size_t> i_fs = {50};
  std::vector<double> etas = {1e-2};
  std::vector<Acceleration> accels = {Acceleration::damping};
  bool early_stop = false;

  if (s == "default") {
    methods = {BenchMethod::hcore, BenchMethod::hybrid};
    ts = kDefaultT;
  } else if (s == "full") {
    methods = {BenchMethod::scf, BenchMethod::scgled};
    ts = {20000};
    i_fs = {100};
    accels = {Acceleration::diis};
    early_stop = true;
  } else {
    methods = {BenchMethod::hybrid};
    ts = {1000};
    for (const std::string& part : split(s, ';')) {
      if (trim(part).empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw InvalidConfig("grid entry '" + part + "' lacks '='");
      const std::string key = trim(std::string_view(part).substr(0, eq));
      std::vector<std::string> values;
      for (const std::string& v : split(std::string_view(part).substr(eq + 1), ','))
        if (!trim(v).empty()) values.push_back(trim(v));
      if (values.empty()) throw InvalidConfig("grid key '" + key + "' has no values");
      if (key == "method") {
        methods.clear();
        for (const auto& v : values) methods.push_back(parse_bench_method(v));
      } else if (key == "t") {
        ts.clear();
        for (const auto& v : values) ts.push_back(to_size(v, "t"));
      } else if (key == "i_f") {
        i_fs.clear();
        for (const auto& v : values) i_fs.push_back(to_size(v, "i_f"));
      } else if (key == "eta") {
        etas.clear();
        for (const auto& v : values) etas.push_back(to_real(v, "eta"));
      } else if (key == "accel") {
        accels.clear();
        for (const auto& v : values) accels.push_back(parse_accel(v));
      } else if (key == "early_stop") {
        if (values.size() != 1 || (values[0] != "0" && values[0] != "1"))
          throw InvalidConfig("early_stop takes a single 0 or 1");
        early_stop = values[0] == "1";
      } else {
        throw InvalidConfig("unknown grid key '" + key + "'");
      }
    }
  }

  std::vector<BenchCell> cells;
  for (BenchMethod m : methods) {
    if (fixed_start(m)) {
      cells.push_back({m, 0, 0, 0.0, Acceleration::vanilla, false});
      continue;
    }
    for (std::size_t t : ts)
      for (std::size_t i_f : i_fs)
        for (double eta : etas)
          for (Acceleration a : accels) {
            BenchCell c{m, t, i_f, eta, a, early_stop};
            validate_config(cell_config(c));
            cells.push_back(c);
          }
  }
  return cells;
}

SolverConfig cell_config(const BenchCell& cell) {
  SolverConfig c;
  c.t_max = cell.t;
  c.i_f = std::max<std::size_t>(cell.i_f, 1);
  c.eta = cell.eta;
  c.accel = cell.accel;
  c.early_stop = cell.early_stop;
  switch (cell.method) {
    case BenchMethod::hybrid:
      c.method = Method::hybrid;
      break;
    case BenchMethod::scgled:
      c.method = Method::scgled;
      break;
    case BenchMethod::scgled_vanilla:
      c.method = Method::scgled_vanilla;
      break;
    case BenchMethod::hcore:
    case BenchMethod::scf:
      c.method = Method::scf;
      c.init = InitGuess::hcore;
      break;
  }
  return c;
}

BenchRow run_cell(const Problem& problem, const BenchCell& cell) {
  BenchRow row;
  row.label = problem.label();
  row.method = std::string(to_string(cell.method));
  row.t = cell.t;
  row.i_f = cell.i_f;
  row.eta = cell.eta;
  row.accel = std::string(to_string(cell.accel));
  const SolverConfig config = cell_config(cell);
  const auto& ref = problem.reference_energy();
  auto set_energy = [&](double e) {
    row.total_energy = e;
    if (ref) row.energy_error = std::abs(e - *ref);
  };

  try {
    switch (cell.method) {
      case BenchMethod::hcore: {
        const auto start = std::chrono::steady_clock::now();
        const Matrix v = initial_guess_hcore(problem);
        row.wall_ms = elapsed_ms(start);
        set_energy(total_energy(problem, v));
        const ConvergenceReport r = scf(problem, v, config);
        row.converged = r.converged;
        row.scf_iters = r.scf_iterations_used;
        break;
      }
      case BenchMethod::hybrid: {
        const ConvergenceReport r = hybrid(problem, config);
        row.wall_ms = r.guess_wall_time.count();
        set_energy(r.guess_energy.value_or(r.total_energy));
        row.converged = r.converged;
        row.scf_iters = r.scf_iterations_used;
        break;
      }
      case BenchMethod::scgled:
      case BenchMethod::scgled_vanilla:
      case BenchMethod::scf: {
        const ConvergenceReport r = solve(problem, config);
        row.wall_ms = r.wall_time.count();
        set_energy(r.total_energy);
        row.converged = r.converged;
        row.scf_iters = r.scf_iterations_used;
        break;
      }
    }
  } catch (const Diverged&) {
    row.converged = false;
    set_energy(std::nan(""));
  }
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<Problem>& problems,
                                const std::vector<BenchCell>& cells, std::size_t threads) {
  const std::size_t jobs = problems.size() * cells.size();
  std::vector<BenchRow> rows(jobs);
  if (jobs == 0) return rows;
  const std::size_t workers = std::min(threads > 0 ? threads : env_threads(), jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      try {
        rows[j] = run_cell(problems[j / cells.size()], cells[j % cells.size()]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<std::filesystem::path> problem_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw InputError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string bench_csv_header() {
  return "label,method,T,i_f,eta,accel,wall_ms,total_energy,energy_error,converged,scf_iters\n";
}

std::string bench_csv_row(const BenchRow& r) {
  std::string out = r.label + "," + r.method + "," + std::to_string(r.t) + "," +
                    std::to_string(r.i_f) + "," + format_real(r.eta) + "," + r.accel + "," +
                    format_real(r.wall_ms) + "," + format_real(r.total_energy) + ",";
  if (r.energy_error) out += format_real(*r.energy_error);
  out += std::string(",") + (r.converged ? "1" : "0") + "," + std::to_string(r.scf_iters) + "\n";
  return out;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool with_header) {
  std::string out = with_header ? bench_csv_header() : std::string();
  for (const BenchRow& r : rows) out += bench_csv_row(r);
  return out;
}

std::vector<BenchRow> parse_bench_csv(std::string_view text) {
  std::vector<BenchRow> rows;
  std::size_t offset = 0;
  for (const std::string& raw : split(text, '\n')) {
    const std::size_t line_start = offset;
    offset += raw.size() + 1;
    const std::string line = trim(raw);
    if (line.empty() || line.rfind("label,", 0) == 0) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) throw ParseError(line_start, "bench row needs 11 fields");
    try {
      BenchRow r;
      r.label = f[0];
      r.method = f[1];
      r.t = to_size(f[2], "T");
      r.i_f = to_size(f[3], "i_f");
      r.eta = to_real(f[4], "eta");
      r.accel = f[5];
      r.wall_ms = to_real(f[6], "wall_ms");
      r.total_energy = to_real(f[7], "total_energy");
      if (!f[8].empty()) r.energy_error = to_real(f[8], "energy_error");
      r.converged = f[9] == "1";
      r.scf_iters = to_size(f[10], "scf_iters");
      rows.push_back(std::move(r));
    } catch (const InvalidConfig& e) {
      throw ParseError(line_start, e.what());
    }
  }
  return rows;
}

BenchCurves bench_curves(const std::vector<BenchRow>& rows) {
  if (rows.empty()) throw EmptyInput("no bench rows to summarise");

  struct Acc {
    std::size_t rows = 0, with_error = 0, not_converged = 0;
    double error_sum = 0.0, log_wall_sum = 0.0;
    void add(const BenchRow& r) {
      ++rows;
      if (r.energy_error && std::isfinite(*r.energy_error)) {
        ++with_error;
        error_sum += *r.energy_error;
      }
      if (!r.converged) ++not_converged;
      log_wall_sum += std::log(std::max(r.wall_ms, 1e-9));
    }
    CurvePoint point() const {
      CurvePoint p;
      p.rows = rows;
      p.with_error = with_error;
      p.mean_energy_error = with_error > 0 ? error_sum / static_cast<double>(with_error) : std::nan("");
      p.not_converged = not_converged;
      p.log_mean_wall_ms = std::exp(log_wall_sum / static_cast<double>(rows));
      return p;
    }
  };

  std::map<std::pair<std::string, std::size_t>, Acc> by_method;
  std::map<std::pair<std::size_t, std::size_t>, Acc> by_i_f;
  for (const BenchRow& r : rows) {
    by_method[{r.method, r.t}].add(r);
    if (r.i_f > 0) by_i_f[{r.i_f, r.t}].add(r);
  }
  BenchCurves out;
  for (const auto& [key, acc] : by_method) {
    CurvePoint p = acc.point();
    p.method = key.first;
    p.t = key.second;
    out.by_method.push_back(std::move(p));
  }
  for (const auto& [key, acc] : by_i_f) {
    CurvePoint p = acc.point();
    p.i_f = key.first;
    p.t = key.second;
    out.by_i_f.push_back(std::move(p));
  }
  return out;
}

std::string curves_csv(const BenchCurves& curves) {
  std::string out = "table,method,i_f,T,rows,mean_energy_error,not_converged,log_mean_wall_ms\n";
  auto emit = [&](const char* table, const CurvePoint& p) {
    out += std::string(table) + "," + p.method + "," + std::to_string(p.i_f) + "," +
           std::to_string(p.t) + "," + std::to_string(p.rows) + "," +
           (p.with_error > 0 ? format_real(p.mean_energy_error) : std::string()) + "," +
           std::to_string(p.not_converged) + "," + format_real(p.log_mean_wall_ms) + "\n";
  };
  for (const auto& p : curves.by_method) emit("method", p);
  for (const auto& p : curves.by_i_f) emit("i_f", p);
  return out;
}

}  // namespace sceig
