#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "sepcheck/complex_matrix.hpp"
#include "sepcheck/states.hpp"

namespace sepcheck {

// State files are JSON objects
//   { "dims": [dA, dB], "matrix": [[[re, im], ...], ...] }
// with rows and columns in composite first-subsystem-major order. Numbers are
// written with 17 significant digits so a write/read cycle is bit-exact.

/// Parsed but not yet validated contents of a state file.
struct RawState {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  ComplexMatrix matrix;
};

/// Throws Error{ParseError} on malformed JSON or schema violations.
RawState parse_state_json(std::string_view text);
RawState read_state_file(const std::filesystem::path& path);

/// Reads and validates; trace is renormalized when within tolerance.
BipartiteDensityMatrix load_state(const std::filesystem::path& path);

std::string format_state_json(std::size_t da, std::size_t db,
                              const ComplexMatrix& matrix);
std::string format_state_json(const BipartiteDensityMatrix& rho);
void write_state_file(const std::filesystem::path& path,
                      const BipartiteDensityMatrix& rho);

/// "%.17g"
std::string format_double(double value);

}  // namespace sepcheck
