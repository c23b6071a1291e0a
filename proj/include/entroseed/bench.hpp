#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "entroseed/elbow.hpp"
#include "entroseed/entropy.hpp"
#include "entroseed/kmeans.hpp"

namespace entroseed {

// One initializer to benchmark: either the random baseline (averaged over
// `random_seeds` deterministic seeds per image) or an entropy spec.
struct MethodConfig {
  std::string label;
  bool random = false;
  int random_seeds = 5;
  EntropySpec spec;
};

// Canonical report tag: "random", "shannon", "taneja(2,1)", ...
std::string method_label(const MethodConfig& method);

struct DatasetManifest {
  std::string name;
  std::vector<std::filesystem::path> image_paths;
  int channels_expected = 3;
  int k = 2;
  double th = -1.0;              // negative = module default
  int representative_image = 0;  // index used for elbow sweeps
  std::vector<MethodConfig> methods;
};

// Parses the plain-text manifest grammar: `key = value` header lines,
// `#` comments, then one image path per line (relative to the manifest).
// See the repository README for the full grammar.
DatasetManifest load_manifest(const std::filesystem::path& path);

struct BenchRow {
  std::string dataset;
  std::string initialization;
  double avg_nik = 0.0;
  double init_time = 0.0;     // seconds, mean over images
  double compute_time = 0.0;  // seconds, mean over images
  double total_time = 0.0;    // init_time + compute_time
  double avg_sse = 0.0;
  int failed_images = 0;      // images excluded from this row's averages
  std::string note;           // first failure message, when any

  bool operator==(const BenchRow&) const = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string clock_source;
  std::string timestamp;    // wall clock, ISO 8601
  std::string config_hash;  // FNV-1a 64 of the manifest text, hex
  std::vector<std::string> nondeterministic_fields;
};

struct BenchOptions {
  // Worker threads for independent image x method runs. 0 = auto: the
  // ENTROSEED_THREADS environment variable, else hardware concurrency.
  int threads = 0;
  KMeansConfig kmeans;
};

// Runs every method over every image of the manifest (seed timed as I_T,
// fit timed as C_T) and aggregates arithmetic means per method.
// Throws IoError/FormatError if any image fails to load; a method erroring
// on an image is recorded in that row's failure note instead.
BenchReport run_benchmark(const DatasetManifest& manifest,
                          const BenchOptions& options = {});

enum class ReportFormat { Csv, Json, Markdown };

std::string emit_report(const BenchReport& report, ReportFormat format);

// Inverse of emit_report(Json); row fields round-trip exactly.
BenchReport parse_report_json(const std::string& text);

// Elbow sweep on the manifest's designated representative image, seeded by
// the manifest's first entropy method (shannon when there is none).
ElbowCurve representative_sweep(const DatasetManifest& manifest, int k_min,
                                int k_max, const KMeansConfig& config = {});

}  // namespace entroseed
