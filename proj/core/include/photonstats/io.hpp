#pragma once

// Text formats: JSON state documents, JSON experiment configs, CSV tables,
// and the atomic file writes used for run outputs.
//
// State document (format "photonstats-state", version 1):
//   {
//     "format": "photonstats-state",
//     "version": 1,
//     "ell": 2,
//     "s_order": 1,                       // -1, 0 or 1; optional, default 1
//     "n": [[re, im], ...],               // ell*ell entries, row-major
//     "m": [[re, im], ...],               // ell*ell entries, row-major
//     "alpha": [[re, im], ...]            // ell entries; optional, default 0
//   }
//
// Experiment config (format "photonstats-experiment", version 1):
//   {
//     "format": "photonstats-experiment",
//     "version": 1,
//     "ell": 8,
//     "k_values": [2, 4, 8],
//     "orders": [1, 2, 3, 4],
//     "trials": 10000,
//     "seed": 12345,
//     "mode_selection": "leading",        // optional; only "leading"
//     "families": [{"kind": "squeezed", "nbar": 1.0},
//                  {"kind": "lossy_squeezed", "nbar": 1.0, "eta": 0.5}]
//   }

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "photonstats/gaussian.hpp"
#include "photonstats/haar_mc.hpp"

namespace photonstats::io {

inline constexpr int kStateFormatVersion = 1;
inline constexpr int kExperimentFormatVersion = 1;

struct StateDocument {
  GaussianState state = GaussianState::vacuum(1);
  SOrder s_order = SOrder::Normal;
};

/// Throws ParseError on malformed documents and ValidationError when the
/// state is unphysical.
StateDocument parse_state(std::string_view text);
StateDocument read_state_file(const std::filesystem::path& path);
std::string dump_state(const GaussianState& state, SOrder s_order = SOrder::Normal);

struct ExperimentConfig {
  /// Family of `base` is ignored; `families` lists the sweep.
  McConfig base;
  std::vector<InputFamily> families;
};

ExperimentConfig parse_experiment(std::string_view text);
ExperimentConfig read_experiment_file(const std::filesystem::path& path);
/// Sorted-key compact JSON of every field, the input to config digests.
std::string canonical_experiment(const ExperimentConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

/// printf "%.12g", the precision used for printed results.
std::string format_value(double x);
/// printf "%.17g": lossless, used in CSV files.
std::string format_exact(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws ParseError if absent.
  std::size_t column(std::string_view name) const;
};

/// RFC 4180 style: fields containing a comma, quote or newline are quoted.
/// Lines end in '\n'.
std::string format_csv(const CsvTable& table);
/// Inverse of format_csv. Throws ParseError on ragged rows or bad quoting.
CsvTable parse_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace photonstats::io
