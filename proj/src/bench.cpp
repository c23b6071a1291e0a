#include "entroseed/bench.hpp"

#include <atomic>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "entroseed/image_io.hpp"
#include "entroseed/seeding.hpp"

namespace entroseed {

std::string method_label(const MethodConfig& method) {
  if (!method.label.empty()) return method.label;
  return method.random ? "random" : spec_label(method.spec);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(context + ": not a number: '" + text + "'");
  }
}

int parse_int(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(context + ": not an integer: '" + text + "'");
  }
}

// Method grammar: "random", "random:N", or "<measure>[(alpha[,beta])]".
MethodConfig parse_method(const std::string& raw, const std::string& context) {
  MethodConfig method;
  const std::string text = trim(raw);
  if (text == "random" || text.rfind("random:", 0) == 0) {
    method.random = true;
    if (text.size() > 7) {
      method.random_seeds = parse_int(text.substr(7), context);
      if (method.random_seeds < 1)
        throw FormatError(context + ": random seed count must be positive");
    }
    method.label = "random";
    return method;
  }

  std::string name = text;
  std::string args;
  const std::size_t open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')')
      throw FormatError(context + ": unbalanced parentheses in '" + text + "'");
    name = trim(text.substr(0, open));
    args = text.substr(open + 1, text.size() - open - 2);
  }
  const auto measure = parse_measure(name);
  if (!measure)
    throw FormatError(context + ": unknown method '" + name + "'");
  method.spec = default_spec(*measure);
  if (!args.empty()) {
    const std::size_t comma = args.find(',');
    if (comma == std::string::npos) {
      method.spec.alpha = parse_double(trim(args), context);
    } else {
      method.spec.alpha = parse_double(trim(args.substr(0, comma)), context);
      method.spec.beta = parse_double(trim(args.substr(comma + 1)), context);
    }
  }
  if (const auto violation = validate(method.spec))
    throw FormatError(context + ": invalid parameters for '" + name +
                      "': requires " + *violation);
  method.label = spec_label(method.spec);
  return method;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ENTROSEED_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct RunOutcome {
  bool ok = false;
  double nik = 0.0;
  double sse = 0.0;
  double init_time = 0.0;
  double compute_time = 0.0;
  std::string error;
};

// One method on one image. Random methods average their metrics over
// seeds 1..random_seeds; entropy methods run the greedy seeder once.
RunOutcome run_one(const PixelGrid& grid, const DatasetManifest& manifest,
                   const MethodConfig& method, const KMeansConfig& kmeans) {
  RunOutcome out;
  try {
    const Eigen::MatrixXd points = feature_matrix(grid);
    const int repeats = method.random ? method.random_seeds : 1;
    for (int r = 0; r < repeats; ++r) {
      CentroidSet init;
      if (method.random) {
        init = random_seed(grid, manifest.k,
                           static_cast<std::uint64_t>(r) + 1);
      } else {
        SeedingConfig config;
        config.k = manifest.k;
        config.th = manifest.th;
        config.spec = method.spec;
        init = entropy_seed(grid, config);
      }
      const KMeansResult result = fit(points, init, kmeans);
      out.nik += result.nik;
      out.sse += result.sse;
      out.init_time += init.init_time;
      out.compute_time += result.compute_time;
    }
    out.nik /= repeats;
    out.sse /= repeats;
    out.init_time /= repeats;
    out.compute_time /= repeats;
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

PixelGrid load_dataset_image(const std::filesystem::path& path,
                             int channels_expected) {
  PixelGrid grid = load_image(path);
  if (channels_expected == 1) {
    grid = to_grayscale(grid);
  } else if (grid.channels != channels_expected) {
    throw DomainError(path.string() + ": expected " +
                      std::to_string(channels_expected) + " channels, got " +
                      std::to_string(grid.channels));
  }
  return grid;
}

std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open manifest");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const std::string context = path.string();

  DatasetManifest manifest;
  manifest.name = path.stem().string();
  const std::filesystem::path base = path.parent_path();

  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      manifest.image_paths.push_back(base / stripped);
      continue;
    }

    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "name") {
      manifest.name = value;
    } else if (key == "channels") {
      manifest.channels_expected = parse_int(value, context);
      if (manifest.channels_expected != 1 && manifest.channels_expected != 3)
        throw FormatError(context + ": channels must be 1 or 3");
    } else if (key == "k") {
      manifest.k = parse_int(value, context);
      if (manifest.k < 2)
        throw FormatError(context +
                          ": k must be at least 2 for a comparison run");
    } else if (key == "th") {
      manifest.th = parse_double(value, context);
    } else if (key == "representative") {
      manifest.representative_image = parse_int(value, context);
    } else if (key == "methods") {
      std::size_t start = 0;
      int depth = 0;
      for (std::size_t i = 0; i <= value.size(); ++i) {
        if (i < value.size() && value[i] == '(') ++depth;
        if (i < value.size() && value[i] == ')') --depth;
        if (i == value.size() || (value[i] == ',' && depth == 0)) {
          const std::string item = trim(value.substr(start, i - start));
          if (!item.empty())
            manifest.methods.push_back(parse_method(item, context));
          start = i + 1;
        }
      }
    } else {
      throw FormatError(context + ": unknown manifest key '" + key + "'");
    }
  }

  if (manifest.image_paths.empty())
    throw FormatError(context + ": manifest lists no images");
  if (manifest.methods.empty())
    throw FormatError(context + ": manifest lists no methods");
  if (manifest.representative_image < 0 ||
      manifest.representative_image >=
          static_cast<int>(manifest.image_paths.size()))
    throw FormatError(context + ": representative index out of range");
  return manifest;
}

BenchReport run_benchmark(const DatasetManifest& manifest,
                          const BenchOptions& options) {
  // Load everything up front so a bad path aborts before any timing runs.
  std::vector<PixelGrid> grids;
  grids.reserve(manifest.image_paths.size());
  for (const auto& p : manifest.image_paths)
    grids.push_back(load_dataset_image(p, manifest.channels_expected));

  const int n_methods = static_cast<int>(manifest.methods.size());
  const int n_images = static_cast<int>(grids.size());
  std::vector<RunOutcome> outcomes(
      static_cast<std::size_t>(n_methods) * n_images);

  const int threads =
      std::min(resolve_threads(options.threads), n_methods * n_images);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int job = next.fetch_add(1); job < n_methods * n_images;
         job = next.fetch_add(1)) {
      const int m = job / n_images;
      const int i = job % n_images;
      outcomes[job] =
          run_one(grids[i], manifest, manifest.methods[m], options.kmeans);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchReport report;
  for (int m = 0; m < n_methods; ++m) {
    BenchRow row;
    row.dataset = manifest.name;
    row.initialization = method_label(manifest.methods[m]);
    int ok_count = 0;
    for (int i = 0; i < n_images; ++i) {
      const RunOutcome& out = outcomes[static_cast<std::size_t>(m) * n_images +
                                       i];
      if (!out.ok) {
        row.failed_images += 1;
        if (row.note.empty()) row.note = out.error;
        continue;
      }
      ++ok_count;
      row.avg_nik += out.nik;
      row.init_time += out.init_time;
      row.compute_time += out.compute_time;
      row.avg_sse += out.sse;
    }
    if (ok_count > 0) {
      row.avg_nik /= ok_count;
      row.init_time /= ok_count;
      row.compute_time /= ok_count;
      row.avg_sse /= ok_count;
    }
    row.total_time = row.init_time + row.compute_time;
    report.rows.push_back(std::move(row));
  }

  report.clock_source = "std::chrono::steady_clock";
  report.timestamp = iso_timestamp();
  {
    // Hash the manifest's logical content, not the file path.
    std::ostringstream canon;
    canon << manifest.name << '\n'
          << manifest.channels_expected << ' ' << manifest.k << ' '
          << manifest.th << ' ' << manifest.representative_image << '\n';
    for (const auto& p : manifest.image_paths)
      canon << p.filename().string() << '\n';
    for (const auto& m : manifest.methods)
      canon << method_label(m) << ':' << m.random_seeds << '\n';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon.str())));
    report.config_hash = buf;
  }
  report.nondeterministic_fields = {"init_time_s", "compute_time_s",
                                    "total_time_s", "timestamp"};
  return report;
}

std::string emit_report(const BenchReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Csv: {
      out << "dataset,initialization,avg_nik,init_time_s,compute_time_s,"
             "total_time_s,avg_sse\n";
      for (const BenchRow& row : report.rows) {
        out << csv_field(row.dataset) << ',' << csv_field(row.initialization)
            << ',' << format_sig(row.avg_nik) << ','
            << format_sig(row.init_time) << ','
            << format_sig(row.compute_time) << ','
            << format_sig(row.total_time) << ',' << format_sig(row.avg_sse)
            << '\n';
      }
      break;
    }
    case ReportFormat::Json: {
      nlohmann::ordered_json doc;
      doc["metadata"] = {
          {"clock_source", report.clock_source},
          {"timestamp", report.timestamp},
          {"config_hash", report.config_hash},
          {"nondeterministic_fields", report.nondeterministic_fields},
      };
      doc["rows"] = nlohmann::ordered_json::array();
      for (const BenchRow& row : report.rows) {
        doc["rows"].push_back({
            {"dataset", row.dataset},
            {"initialization", row.initialization},
            {"avg_nik", row.avg_nik},
            {"init_time_s", row.init_time},
            {"compute_time_s", row.compute_time},
            {"total_time_s", row.total_time},
            {"avg_sse", row.avg_sse},
            {"failed_images", row.failed_images},
            {"note", row.note},
        });
      }
      out << doc.dump(2) << '\n';
      break;
    }
    case ReportFormat::Markdown: {
      out << "| Dataset | Initialization | Avg. NIK | Init Time (s) | "
             "Compute Time (s) | Total Time (s) | Avg. SSE |\n";
      out << "|---|---|---|---|---|---|---|\n";
      for (const BenchRow& row : report.rows) {
        out << "| " << row.dataset << " | " << row.initialization << " | "
            << format_sig(row.avg_nik) << " | " << format_sig(row.init_time)
            << " | " << format_sig(row.compute_time) << " | "
            << format_sig(row.total_time) << " | " << format_sig(row.avg_sse)
            << " |\n";
      }
      bool footer = false;
      for (const BenchRow& row : report.rows) {
        if (row.failed_images == 0) continue;
        if (!footer) {
          out << '\n';
          footer = true;
        }
        out << "- `" << row.initialization << "`: " << row.failed_images
            << " image(s) failed — " << row.note << '\n';
      }
      break;
    }
  }
  return out.str();
}

BenchReport parse_report_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report parse failed: ") + e.what());
  }
  try {
    BenchReport report;
    const auto& meta = doc.at("metadata");
    report.clock_source = meta.at("clock_source").get<std::string>();
    report.timestamp = meta.at("timestamp").get<std::string>();
    report.config_hash = meta.at("config_hash").get<std::string>();
    report.nondeterministic_fields =
        meta.at("nondeterministic_fields").get<std::vector<std::string>>();
    for (const auto& r : doc.at("rows")) {
      BenchRow row;
      row.dataset = r.at("dataset").get<std::string>();
      row.initialization = r.at("initialization").get<std::string>();
      row.avg_nik = r.at("avg_nik").get<double>();
      row.init_time = r.at("init_time_s").get<double>();
      row.compute_time = r.at("compute_time_s").get<double>();
      row.total_time = r.at("total_time_s").get<double>();
      row.avg_sse = r.at("avg_sse").get<double>();
      row.failed_images = r.at("failed_images").get<int>();
      row.note = r.at("note").get<std::string>();
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report schema mismatch: ") + e.what());
  }
}

ElbowCurve representative_sweep(const DatasetManifest& manifest, int k_min,
                                int k_max, const KMeansConfig& config) {
  const PixelGrid grid =
      load_dataset_image(manifest.image_paths[manifest.representative_image],
                         manifest.channels_expected);
  EntropySpec spec = default_spec(Measure::Shannon);
  for (const MethodConfig& m : manifest.methods) {
    if (!m.random) {
      spec = m.spec;
      break;
    }
  }
  const Eigen::MatrixXd points = feature_matrix(grid);
  const Seeder seeder = [&](int k) {
    SeedingConfig seed_config;
    seed_config.k = k;
    seed_config.th = manifest.th;
    seed_config.spec = spec;
    return entropy_seed(grid, seed_config);
  };
  return k_sweep(points, k_min, k_max, seeder, config);
}

}  // namespace entroseed
