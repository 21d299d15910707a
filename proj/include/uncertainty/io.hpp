#pragma once

// File ingestion for custom observables and states, locale-independent number
// formatting, and atomic file output.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "uncertainty/kernel.hpp"

namespace unc {

/// Filesystem failure while reading inputs or writing reports.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses {"dim": d, "entries": [[re, im], ...]} with d*d row-major entries,
/// then checks Hermiticity at 1e-10.
CMatrixd observable_from_json(const nlohmann::json& doc);

/// Parses {"dim": d, "entries": [[re, im], ...]} with d entries. The state must
/// be normalized at 1e-10 unless `normalize` is set, in which case it is rescaled.
CVectord state_from_json(const nlohmann::json& doc, bool normalize);

nlohmann::json to_json(const CMatrixd& m);
nlohmann::json to_json(const CVectord& v);

CMatrixd load_observable(const std::filesystem::path& path);
CVectord load_state(const std::filesystem::path& path, bool normalize);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double x);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace unc
