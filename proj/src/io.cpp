#include "sceig/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sceig/errors.hpp"

namespace sceig {

namespace {

using json = nlohmann::json;

const json& field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(0, std::string("missing field \"") + key + "\"");
  return *it;
}

double real_field(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number()) throw ParseError(0, std::string("field \"") + key + "\" is not a number");
  return v.get<double>();
}

long integer_field(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number_integer())
    throw ParseError(0, std::string("field \"") + key + "\" is not an integer");
  return v.get<long>();
}

std::vector<double> real_array(const json& doc, const char* key, std::size_t expected) {
  const json& v = field(doc, key);
  if (!v.is_array()) throw ParseError(0, std::string("field \"") + key + "\" is not an array");
  if (v.size() != expected)
    throw DimensionMismatch(std::string(key) + " length", expected, v.size());
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& x : v) {
    if (!x.is_number())
      throw ParseError(0, std::string("non-numeric entry in \"") + key + "\"");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix square_from_row_major(const std::vector<double>& flat, std::size_t n) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * n + j];
  return m;
}

void append_rows(std::string& out, const double* values, std::size_t count, std::size_t per_line) {
  out += "[\n";
  for (std::size_t i = 0; i < count; ++i) {
    if (i % per_line == 0) out += "    ";
    out += format_real(values[i]);
    if (i + 1 < count) out += (i + 1) % per_line == 0 ? ",\n" : ", ";
  }
  out += count > 0 ? "\n  ]" : "  ]";
}

std::vector<double> row_major(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_real(double x) {
  if (x == 0.0 && std::signbit(x)) return "-0.0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ProblemData parse_problem_data(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  if (!doc.is_object()) throw ParseError(0, "problem file must hold a JSON object");

  const long version = integer_field(doc, "version");
  if (version != kProblemFileVersion)
    throw ParseError(0, "unsupported problem file version " + std::to_string(version));

  ProblemData d;
  const long n = integer_field(doc, "n_basis");
  if (n < 0) throw ParseError(0, "n_basis must be non-negative");
  d.n_basis = static_cast<std::size_t>(n);
  d.k = integer_field(doc, "k");
  d.nuclear_repulsion = real_field(doc, "nuclear_repulsion");
  if (doc.contains("reference_energy") && !doc["reference_energy"].is_null())
    d.reference_energy = real_field(doc, "reference_energy");
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw ParseError(0, "field \"label\" is not a string");
    d.label = doc["label"].get<std::string>();
  }

  const std::size_t n2 = d.n_basis * d.n_basis;
  d.overlap = square_from_row_major(real_array(doc, "s", n2), d.n_basis);
  d.core_hamiltonian = square_from_row_major(real_array(doc, "h", n2), d.n_basis);
  d.eri = EriTensor(d.n_basis, real_array(doc, "eri", n2 * n2));
  return d;
}

Problem parse_problem(std::string_view text) { return validate_problem(parse_problem_data(text)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

Problem read_problem_file(const std::filesystem::path& path) {
  return parse_problem(read_text_file(path));
}

std::string write_problem(const ProblemData& d) {
  const std::size_t n = d.n_basis;
  std::string out = "{\n";
  out += "  \"version\": " + std::to_string(kProblemFileVersion) + ",\n";
  out += "  \"label\": " + json(d.label).dump() + ",\n";
  out += "  \"n_basis\": " + std::to_string(n) + ",\n";
  out += "  \"k\": " + std::to_string(d.k) + ",\n";
  out += "  \"nuclear_repulsion\": " + format_real(d.nuclear_repulsion) + ",\n";
  if (d.reference_energy)
    out += "  \"reference_energy\": " + format_real(*d.reference_energy) + ",\n";
  const std::size_t per_line = n > 0 ? n : 1;
  const std::vector<double> s = row_major(d.overlap);
  const std::vector<double> h = row_major(d.core_hamiltonian);
  out += "  \"s\": ";
  append_rows(out, s.data(), s.size(), per_line);
  out += ",\n  \"h\": ";
  append_rows(out, h.data(), h.size(), per_line);
  out += ",\n  \"eri\": ";
  append_rows(out, d.eri.values().data(), d.eri.values().size(), per_line);
  out += "\n}\n";
  return out;
}

std::string write_problem(const Problem& problem) { return write_problem(problem.data()); }

std::string report_json(const ConvergenceReport& r, const Problem& problem,
                        const SolverConfig& c) {
  nlohmann::ordered_json doc;
  doc["label"] = problem.label();
  doc["method"] = std::string(to_string(r.method));
  doc["n_basis"] = problem.n_basis();
  doc["k"] = problem.k();

  nlohmann::ordered_json cfg;
  cfg["eta"] = c.eta;
  cfg["alpha"] = c.alpha;
  cfg["beta"] = c.beta;
  cfg["t"] = c.t_max;
  cfg["i_f"] = c.i_f;
  cfg["accel"] = std::string(to_string(c.accel));
  cfg["scf_accel"] = std::string(to_string(c.scf_accel));
  cfg["diis_tail"] = c.diis_tail_fraction;
  cfg["energy_tol"] = c.energy_tol;
  cfg["density_tol"] = c.density_tol;
  cfg["init"] = std::string(to_string(c.init));
  cfg["seed"] = c.seed;
  cfg["early_stop"] = c.early_stop;
  doc["config"] = std::move(cfg);

  doc["converged"] = r.converged;
  doc["total_energy"] = r.total_energy;
  doc["energy_error"] = r.energy_error ? nlohmann::ordered_json(*r.energy_error) : nullptr;
  doc["residual"] = r.residual;
  doc["iterations"] = r.iterations_used;
  doc["scf_iterations"] = r.scf_iterations_used;
  if (r.guess_energy) doc["guess_energy"] = *r.guess_energy;
  doc["eigenvalues"] = std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  doc["v_star"] = matrix_json(r.v_star);
  doc["degenerate_utility_events"] = r.degenerate_utility_events;
  doc["diis_fallbacks"] = r.diis_fallbacks;
  doc["warnings"] = r.warnings;
  doc["wall_ms"] = r.wall_time.count();
  doc["wall_ms_guess"] = r.guess_wall_time.count();

  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const TraceRecord& t : r.trace) {
    nlohmann::ordered_json row;
    row["iteration"] = t.iteration;
    row["total_energy"] = t.total_energy;
    row["residual"] = t.residual;
    row["density_change"] = t.density_change;
    row["wall_ms"] = t.wall_time_so_far.count();
    trace.push_back(std::move(row));
  }
  doc["trace"] = std::move(trace);
  return doc.dump(2) + "\n";
}

std::string trace_csv(const ConvergenceReport& r, const Problem& problem) {
  std::string out = "iteration,total_energy,energy_error,residual,density_change,wall_ms\n";
  const auto& ref = problem.reference_energy();
  for (const TraceRecord& t : r.trace) {
    out += std::to_string(t.iteration) + "," + format_real(t.total_energy) + ",";
    if (ref) out += format_real(std::abs(t.total_energy - *ref));
    out += "," + format_real(t.residual) + "," + format_real(t.density_change) + "," +
           format_real(t.wall_time_so_far.count()) + "\n";
  }
  return out;
}

}  // namespace sceig
