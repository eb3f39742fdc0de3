#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sceig/problem.hpp"
#include "sceig/solvers.hpp"

namespace sceig {

inline constexpr int kProblemFileVersion = 1;

/// Structural parse only. Throws ParseError (with a byte offset when the
/// JSON itself is malformed) or DimensionMismatch for wrong array lengths.
ProblemData parse_problem_data(std::string_view text);
/// parse_problem_data followed by validate_problem.
Problem parse_problem(std::string_view text);
Problem read_problem_file(const std::filesystem::path& path);

/// Canonical form: fixed key order, %.17g reals, one matrix row per line.
std::string write_problem(const ProblemData& data);
std::string write_problem(const Problem& problem);

/// %.17g, with negative zero spelled "-0.0" so it survives a JSON parse.
std::string format_real(double x);

/// JSON report. Every key holding a wall time starts with "wall" and sits on
/// its own line.
std::string report_json(const ConvergenceReport& report, const Problem& problem,
                        const SolverConfig& config);

/// iteration,total_energy,energy_error,residual,density_change,wall_ms
std::string trace_csv(const ConvergenceReport& report, const Problem& problem);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace sceig
