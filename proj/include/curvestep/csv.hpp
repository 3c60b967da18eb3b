#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "curvestep/run_record.hpp"

namespace curvestep {

/// File could not be opened, read, or written (maps to CLI exit code 4).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, scientific notation: exact round-trip and
/// deterministic byte output.
std::string format_double(double x);

/// Parse a double written by format_double (or any strtod-compatible text).
double parse_double(const std::string& s);

/// Run trajectory as CSV with LF line endings. Commented header lines carry
/// the counters and the dt-change log so a read round-trips the full record.
/// Columns: t, dt, k_eff, d0..d{n-1}, v0.., a0..
void write_run_csv(const RunRecord& rec, const std::filesystem::path& file);

/// Inverse of write_run_csv. Throws std::runtime_error on malformed input.
RunRecord read_run_csv(const std::filesystem::path& file);

/// Small generic CSV writer: one header row plus preformatted cells, LF only.
void write_table_csv(const std::filesystem::path& file,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

}  // namespace curvestep
