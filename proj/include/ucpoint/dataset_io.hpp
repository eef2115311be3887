#pragma once

// Project datasets (CSV), fitted estimator files (JSON) and the synthetic
// dataset generator. Formats are described in docs/formats.md.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ucpoint/adjustment.hpp"
#include "ucpoint/regression.hpp"

namespace ucpoint {

struct ProjectRecord {
  std::string project_id;
  std::optional<double> size_ucp;  // always set on records returned by load_dataset
  std::string spec_file;           // empty when absent; relative to the CSV's directory
  double actual_effort_ph = 0.0;
  int complexity_level = 3;
  ProductivityRatings productivity;
  std::optional<double> legacy_ucp;  // derived from spec_file on load, never written

  friend bool operator==(const ProjectRecord&, const ProjectRecord&) = default;
};

inline constexpr std::array<const char*, 10> kDatasetColumns = {
    "project_id",       "size_ucp", "spec_file",       "actual_effort_ph", "complexity_level",
    "prod_domain", "prod_motivation", "prod_language", "prod_oo",          "prod_analytical"};

struct DatasetDiagnostic {
  std::size_t line = 0;  // 1-based line in the file; the header is line 1
  std::string column;    // empty when the problem concerns the whole row
  Severity severity = Severity::Error;
  std::string message;
};

struct Dataset {
  std::vector<ProjectRecord> records;
  std::vector<DatasetDiagnostic> diagnostics;
};

// Unreadable file, missing required columns, or no valid rows.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// spec_file paths are resolved against base_dir.
Dataset parse_dataset(std::string_view text, const std::filesystem::path& base_dir = {});
Dataset load_dataset(const std::filesystem::path& path);

std::string format_dataset(const std::vector<ProjectRecord>& records);
void write_dataset(const std::vector<ProjectRecord>& records, const std::filesystem::path& path);

std::vector<SizeEffort> size_effort_pairs(const std::vector<ProjectRecord>& records);

inline constexpr int kEstimatorFormatVersion = 1;

class EstimatorFileError : public std::runtime_error {
 public:
  enum class Kind { Unreadable, Malformed, Version };
  EstimatorFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string format_estimator(const PiecewiseEstimator& est);
PiecewiseEstimator parse_estimator(std::string_view text);
void save_estimator(const PiecewiseEstimator& est, const std::filesystem::path& path);
PiecewiseEstimator load_estimator(const std::filesystem::path& path);

// Ground-truth curves behind the synthetic datasets, one per size range,
// using that range's default form.
ModelForm synthetic_truth(SizeRange range);
double synthetic_effort(double size);

struct RangeCounts {
  std::size_t small = 0;
  std::size_t medium = 0;
  std::size_t large = 0;
};

// Deterministic for a seed. Sizes are uniform in Small [10,100),
// Medium [100,300], Large (300,1500]; efforts are the ground truth times
// (1 + noise * u) with u uniform in [-1, 1). noise is a fraction in [0, 1)
// (0.05 = 5%).
std::vector<ProjectRecord> generate_synthetic(std::uint64_t seed, RangeCounts counts, double noise);

}  // namespace ucpoint
