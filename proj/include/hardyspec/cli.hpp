#pragma once

// Command-line front end. Subcommands:
//   thresholds, min-degree, hardy-verify, psi-check, spectrum,
//   fall-to-center, phase-diagram
// Exit status: 0 success, 1 invalid arguments, 2 numerical diagnostic failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hardyspec/harmonics.hpp"

namespace hardyspec::cli {

enum ExitCode : int { kSuccess = 0, kInvalidArguments = 1, kDiagnosticFailure = 2 };

/// Environment variable naming the directory that relative --out paths are
/// resolved against.
inline constexpr const char* kOutputDirEnv = "HARDYSPEC_OUTPUT_DIR";

/// Runs one subcommand. args[0] is the program name.
int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1,2,4" -> {1, 2, 4}. Throws DomainError on malformed input.
std::vector<double> parse_double_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

/// "a:b:step" -> {a, a+step, ..., <= b}, or "a:b" for integer ranges with
/// step 1. Values are a + i*step, so no rounding drift accumulates.
std::vector<double> parse_double_range(std::string_view text);
std::vector<int> parse_int_range(std::string_view text);

/// Polynomial terms, either plain text or JSON.
///
/// Plain text: terms separated by ';', each "e1,e2,...,eN:coefficient",
/// e.g. "2,0:1;0,2:-1" for x1^2 - x2^2.
/// JSON: [{"exponents": [2, 0], "coefficient": 1.0}, ...]
/// Text starting with '[' is parsed as JSON.
std::vector<harmonics::Monomial> parse_polynomial(std::string_view text);

/// Harmonic for a --family name: zonal, planar-cos, planar-sin, product, poly.
harmonics::HarmonicSpec make_family(std::string_view family, int N, int degree,
                                    const std::optional<std::string>& polynomial);

}  // namespace hardyspec::cli
