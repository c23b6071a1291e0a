#include "entroseed/bench.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "entroseed/errors.hpp"
#include "entroseed/image_io.hpp"
#include "entroseed/kmeans.hpp"
#include "entroseed/seeding.hpp"

using namespace entroseed;

namespace {

// Scratch directory holding generated manifests and tiny PGM images;
// removed wholesale on destruction.
class BenchFixture {
 public:
  BenchFixture() {
    dir_ = std::filesystem::temp_directory_path() / "entroseed_bench_tests";
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }

  ~BenchFixture() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }

  std::filesystem::path write(const std::string& name,
                              const std::string& text) const {
    const auto path = dir_ / name;
    std::ofstream out(path);
    out << text;
    return path;
  }

 private:
  std::filesystem::path dir_;
};

// 2x2 grayscale test images with well-separated intensities so that k = 2
// entropy seeding succeeds at the thresholds used below.
const char* kImageA = "P2\n2 2\n255\n10 10 20 200\n";
const char* kImageB = "P2\n2 2\n255\n0 0 120 255\n";
const char* kImageFlat = "P2\n2 2\n255\n77 77 77 77\n";

// Reference metrics for one entropy method on one image, mirroring a
// benchmark cell: seed once, fit once.
struct CellMetrics {
  double nik = 0.0;
  double sse = 0.0;
};

CellMetrics entropy_cell(const std::filesystem::path& image, int k, double th,
                         const EntropySpec& spec) {
  const PixelGrid grid = to_grayscale(load_image(image));
  SeedingConfig config;
  config.k = k;
  config.th = th;
  config.spec = spec;
  const CentroidSet init = entropy_seed(grid, config);
  const KMeansResult result = fit(feature_matrix(grid), init);
  return {static_cast<double>(result.nik), result.sse};
}

CellMetrics random_cell(const std::filesystem::path& image, int k,
                        int seeds) {
  const PixelGrid grid = to_grayscale(load_image(image));
  CellMetrics avg;
  for (int r = 1; r <= seeds; ++r) {
    const CentroidSet init = random_seed(grid, k, static_cast<uint64_t>(r));
    const KMeansResult result = fit(feature_matrix(grid), init);
    avg.nik += result.nik;
    avg.sse += result.sse;
  }
  avg.nik /= seeds;
  avg.sse /= seeds;
  return avg;
}

}  // namespace

TEST_CASE("load_manifest parses every key of the grammar") {
  BenchFixture fx;
  fx.write("imgA.pgm", kImageA);
  fx.write("imgB.pgm", kImageB);
  const auto path = fx.write("demo.txt",
                             "# demo dataset\n"
                             "name = demo\n"
                             "channels = 1\n"
                             "k = 2\n"
                             "th = 50\n"
                             "representative = 1\n"
                             "methods = random:3, shannon, taneja(2, 1)\n"
                             "\n"
                             "imgA.pgm\n"
                             "imgB.pgm\n");

  const DatasetManifest manifest = load_manifest(path);
  CHECK(manifest.name == "demo");
  CHECK(manifest.channels_expected == 1);
  CHECK(manifest.k == 2);
  CHECK(manifest.th == 50.0);
  CHECK(manifest.representative_image == 1);

  REQUIRE(manifest.image_paths.size() == 2);
  CHECK(manifest.image_paths[0].filename() == "imgA.pgm");
  CHECK(manifest.image_paths[0].parent_path() == path.parent_path());

  REQUIRE(manifest.methods.size() == 3);
  CHECK(manifest.methods[0].random);
  CHECK(manifest.methods[0].random_seeds == 3);
  CHECK(method_label(manifest.methods[0]) == "random");
  CHECK_FALSE(manifest.methods[1].random);
  CHECK(method_label(manifest.methods[1]) == "shannon");
  CHECK(method_label(manifest.methods[2]) == "taneja(2,1)");
  CHECK(manifest.methods[2].spec.alpha == 2.0);
  CHECK(manifest.methods[2].spec.beta == 1.0);
}

TEST_CASE("load_manifest applies defaults") {
  BenchFixture fx;
  fx.write("imgA.pgm", kImageA);
  const auto path = fx.write("defaults.txt",
                             "methods = shannon\n"
                             "imgA.pgm\n");
  const DatasetManifest manifest = load_manifest(path);
  CHECK(manifest.name == "defaults");  // file stem
  CHECK(manifest.channels_expected == 3);
  CHECK(manifest.k == 2);
  CHECK(manifest.th == -1.0);
  CHECK(manifest.representative_image == 0);
}

TEST_CASE("load_manifest rejects malformed input") {
  BenchFixture fx;
  fx.write("imgA.pgm", kImageA);
  auto expect_format_error = [&](const char* name, const std::string& body) {
    const auto path = fx.write(name, body);
    CHECK_THROWS_AS(load_manifest(path), FormatError);
  };

  expect_format_error("unknown_key.txt",
                      "mystery = 1\nmethods = shannon\nimgA.pgm\n");
  expect_format_error("low_k.txt",
                      "k = 1\nmethods = shannon\nimgA.pgm\n");
  expect_format_error("channels.txt",
                      "channels = 2\nmethods = shannon\nimgA.pgm\n");
  expect_format_error("no_images.txt", "methods = shannon\n");
  expect_format_error("no_methods.txt", "imgA.pgm\n");
  expect_format_error("bad_rep.txt",
                      "representative = 5\nmethods = shannon\nimgA.pgm\n");
  expect_format_error("bad_method.txt",
                      "methods = sharma\nimgA.pgm\n");
  expect_format_error("unbalanced.txt",
                      "methods = kapur(2\nimgA.pgm\n");
  expect_format_error("zero_seeds.txt",
                      "methods = random:0\nimgA.pgm\n");
  expect_format_error("bad_number.txt",
                      "th = fast\nmethods = shannon\nimgA.pgm\n");

  SUBCASE("invalid measure parameters carry the constraint text") {
    const auto path = fx.write("bad_params.txt",
                               "methods = kapur(1, 2)\nimgA.pgm\n");
    CHECK_THROWS_WITH_AS(load_manifest(path),
                         doctest::Contains("α ≠ 1"), FormatError);
  }

  SUBCASE("missing manifest file is an I/O error") {
    CHECK_THROWS_AS(load_manifest("/nonexistent/entroseed/manifest.txt"),
                    IoError);
  }
}

TEST_CASE("single-cell benchmark row matches a direct run") {
  BenchFixture fx;
  const auto image = fx.write("imgA.pgm", kImageA);
  const auto path = fx.write("one.txt",
                             "name = one\nchannels = 1\nk = 2\nth = 50\n"
                             "methods = shannon\nimgA.pgm\n");

  const BenchReport report = run_benchmark(load_manifest(path));
  REQUIRE(report.rows.size() == 1);
  const BenchRow& row = report.rows[0];
  CHECK(row.dataset == "one");
  CHECK(row.initialization == "shannon");
  CHECK(row.failed_images == 0);
  CHECK(row.note.empty());
  CHECK(row.total_time == row.init_time + row.compute_time);

  const CellMetrics direct =
      entropy_cell(image, 2, 50.0, default_spec(Measure::Shannon));
  CHECK(row.avg_nik == direct.nik);
  CHECK(row.avg_sse == direct.sse);
}

TEST_CASE("multi-image rows are arithmetic means over the images") {
  BenchFixture fx;
  const auto image_a = fx.write("imgA.pgm", kImageA);
  const auto image_b = fx.write("imgB.pgm", kImageB);
  const auto path = fx.write("two.txt",
                             "name = two\nchannels = 1\nk = 2\nth = 50\n"
                             "methods = shannon, random:2\n"
                             "imgA.pgm\nimgB.pgm\n");

  const BenchReport report = run_benchmark(load_manifest(path));
  REQUIRE(report.rows.size() == 2);

  const EntropySpec shannon = default_spec(Measure::Shannon);
  const CellMetrics cell_a = entropy_cell(image_a, 2, 50.0, shannon);
  const CellMetrics cell_b = entropy_cell(image_b, 2, 50.0, shannon);
  CHECK(report.rows[0].avg_nik == (cell_a.nik + cell_b.nik) / 2);
  CHECK(report.rows[0].avg_sse == (cell_a.sse + cell_b.sse) / 2);

  const CellMetrics rand_a = random_cell(image_a, 2, 2);
  const CellMetrics rand_b = random_cell(image_b, 2, 2);
  CHECK(report.rows[1].initialization == "random");
  CHECK(report.rows[1].avg_nik == (rand_a.nik + rand_b.nik) / 2);
  CHECK(report.rows[1].avg_sse == (rand_a.sse + rand_b.sse) / 2);
}

TEST_CASE("benchmark metrics are deterministic across runs and threads") {
  BenchFixture fx;
  fx.write("imgA.pgm", kImageA);
  fx.write("imgB.pgm", kImageB);
  const auto path = fx.write("det.txt",
                             "name = det\nchannels = 1\nk = 2\nth = 50\n"
                             "methods = random:3, shannon, kapur(2, 2)\n"
                             "imgA.pgm\nimgB.pgm\n");
  const DatasetManifest manifest = load_manifest(path);

  BenchOptions serial;
  serial.threads = 1;
  BenchOptions parallel;
  parallel.threads = 4;

  const BenchReport first = run_benchmark(manifest, serial);
  const BenchReport second = run_benchmark(manifest, serial);
  const BenchReport threaded = run_benchmark(manifest, parallel);

  REQUIRE(first.rows.size() == 3);
  REQUIRE(second.rows.size() == 3);
  REQUIRE(threaded.rows.size() == 3);
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    CHECK(first.rows[i].initialization == second.rows[i].initialization);
    CHECK(first.rows[i].avg_nik == second.rows[i].avg_nik);
    CHECK(first.rows[i].avg_sse == second.rows[i].avg_sse);
    CHECK(first.rows[i].avg_nik == threaded.rows[i].avg_nik);
    CHECK(first.rows[i].avg_sse == threaded.rows[i].avg_sse);
  }
  CHECK(first.config_hash == second.config_hash);
  CHECK(first.clock_source == "std::chrono::steady_clock");
  CHECK(first.nondeterministic_fields ==
        std::vector<std::string>{"init_time_s", "compute_time_s",
                                 "total_time_s", "timestamp"});
}

TEST_CASE("config hash tracks the manifest content") {
  BenchFixture fx;
  fx.write("imgA.pgm", kImageA);
  const auto base = fx.write("hash_a.txt",
                             "name = hash\nchannels = 1\nk = 2\nth = 50\n"
                             "methods = shannon\nimgA.pgm\n");
  const auto changed = fx.write("hash_b.txt",
                                "name = hash\nchannels = 1\nk = 2\nth = 25\n"
                                "methods = shannon\nimgA.pgm\n");

  const BenchReport r1 = run_benchmark(load_manifest(base));
  const BenchReport r2 = run_benchmark(load_manifest(base));
  const BenchReport r3 = run_benchmark(load_manifest(changed));
  CHECK(r1.config_hash == r2.config_hash);
  CHECK(r1.config_hash != r3.config_hash);
  CHECK(r1.config_hash.size() == 16);  // zero-padded 64-bit hex
}

TEST_CASE("a method failing on one image is recorded, not fatal") {
  BenchFixture fx;
  fx.write("flat.pgm", kImageFlat);
  fx.write("imgA.pgm", kImageA);
  const auto path = fx.write("fail.txt",
                             "name = fail\nchannels = 1\nk = 2\nth = 50\n"
                             "methods = shannon, random:2\n"
                             "flat.pgm\nimgA.pgm\n");

  const BenchReport report = run_benchmark(load_manifest(path));
  REQUIRE(report.rows.size() == 2);

  // Entropy seeding cannot find two seeds on a constant image: adaptive
  // halving bottoms out. The flat image is excluded from the averages.
  const BenchRow& shannon = report.rows[0];
  CHECK(shannon.failed_images == 1);
  CHECK(shannon.note.find("seeding exhausted") != std::string::npos);
  const CellMetrics direct = entropy_cell(fx.write("imgA.pgm", kImageA), 2,
                                          50.0, default_spec(Measure::Shannon));
  CHECK(shannon.avg_sse == direct.sse);

  // Random seeding tolerates duplicate intensities.
  CHECK(report.rows[1].failed_images == 0);
}

TEST_CASE("missing image files abort the benchmark") {
  BenchFixture fx;
  const auto path = fx.write("gone.txt",
                             "channels = 1\nmethods = shannon\nmissing.pgm\n");
  CHECK_THROWS_AS(run_benchmark(load_manifest(path)), IoError);
}

TEST_CASE("rgb manifest rejects grayscale images") {
  BenchFixture fx;
  fx.write("imgA.pgm", kImageA);
  const auto path = fx.write("rgb.txt",
                             "channels = 3\nmethods = shannon\nimgA.pgm\n");
  CHECK_THROWS_WITH_AS(run_benchmark(load_manifest(path)),
                       doctest::Contains("expected 3 channels"), DomainError);
}

TEST_CASE("emit_report renders CSV with quoting") {
  BenchReport report;
  report.clock_source = "std::chrono::steady_clock";
  report.timestamp = "2026-01-01T00:00:00Z";
  report.config_hash = "00000000deadbeef";
  report.nondeterministic_fields = {"timestamp"};

  SUBCASE("empty report is just the header") {
    CHECK(emit_report(report, ReportFormat::Csv) ==
          "dataset,initialization,avg_nik,init_time_s,compute_time_s,"
          "total_time_s,avg_sse\n");
  }

  SUBCASE("labels containing commas are quoted") {
    BenchRow row;
    row.dataset = "demo";
    row.initialization = "taneja(2,1)";
    row.avg_nik = 3.5;
    row.init_time = 0.001234567;
    row.compute_time = 0.002;
    row.total_time = 0.003234567;
    row.avg_sse = 12345.6789;
    report.rows.push_back(row);

    const std::string csv = emit_report(report, ReportFormat::Csv);
    const std::string expected_row =
        "demo,\"taneja(2,1)\",3.5,0.00123457,0.002,0.00323457,12345.7\n";
    CHECK(csv ==
          "dataset,initialization,avg_nik,init_time_s,compute_time_s,"
          "total_time_s,avg_sse\n" +
              expected_row);
  }
}

TEST_CASE("emit_report renders a markdown table with failure footnotes") {
  BenchReport report;
  BenchRow ok;
  ok.dataset = "demo";
  ok.initialization = "shannon";
  ok.avg_nik = 4;
  ok.avg_sse = 100;
  BenchRow bad = ok;
  bad.initialization = "kapur(2,2)";
  bad.failed_images = 1;
  bad.note = "img_3.png: seeding exhausted";
  report.rows = {ok, bad};

  const std::string md = emit_report(report, ReportFormat::Markdown);
  CHECK(md.find("| Dataset | Initialization | Avg. NIK | Init Time (s) | "
                "Compute Time (s) | Total Time (s) | Avg. SSE |") == 0);
  CHECK(md.find("| demo | shannon | 4 |") != std::string::npos);
  CHECK(md.find("| demo | kapur(2,2) |") != std::string::npos);
  CHECK(md.find("- `kapur(2,2)`: 1 image(s) failed") != std::string::npos);
  CHECK(md.find("img_3.png: seeding exhausted") != std::string::npos);
}

TEST_CASE("JSON reports round-trip exactly") {
  BenchReport report;
  report.clock_source = "std::chrono::steady_clock";
  report.timestamp = "2026-08-15T12:00:00Z";
  report.config_hash = "0123456789abcdef";
  report.nondeterministic_fields = {"init_time_s", "compute_time_s",
                                    "total_time_s", "timestamp"};

  BenchRow row;
  row.dataset = "demo";
  row.initialization = "taneja(2,1)";
  row.avg_nik = 1.0 / 3.0;  // not representable in 6 significant digits
  row.init_time = 1.23456789e-07;
  row.compute_time = 0.9999999999999998;
  row.total_time = row.init_time + row.compute_time;
  row.avg_sse = 6163815.1234567891;
  row.failed_images = 2;
  row.note = "img: seeding exhausted";
  report.rows = {row, BenchRow{"demo", "random", 4, 0, 0, 0, 9, 0, ""}};

  const std::string json = emit_report(report, ReportFormat::Json);
  const BenchReport parsed = parse_report_json(json);
  CHECK(parsed.rows == report.rows);  // bitwise field equality
  CHECK(parsed.clock_source == report.clock_source);
  CHECK(parsed.timestamp == report.timestamp);
  CHECK(parsed.config_hash == report.config_hash);
  CHECK(parsed.nondeterministic_fields == report.nondeterministic_fields);
}

TEST_CASE("parse_report_json rejects malformed documents") {
  CHECK_THROWS_AS(parse_report_json("not json at all"), FormatError);
  CHECK_THROWS_AS(parse_report_json("{\"metadata\": {}}"), FormatError);
  CHECK_THROWS_AS(parse_report_json("{\"metadata\": {\"clock_source\": \"x\","
                                    "\"timestamp\": \"t\", \"config_hash\":"
                                    "\"h\", \"nondeterministic_fields\": []},"
                                    "\"rows\": [{\"dataset\": \"d\"}]}"),
                  FormatError);
}

TEST_CASE("representative_sweep runs the elbow on the designated image") {
  BenchFixture fx;
  fx.write("imgA.pgm", kImageA);
  fx.write("imgB.pgm", kImageB);
  const auto path = fx.write("rep.txt",
                             "name = rep\nchannels = 1\nk = 3\nth = 50\n"
                             "representative = 1\n"
                             "methods = random:2, taneja(2, 1)\n"
                             "imgA.pgm\nimgB.pgm\n");

  const ElbowCurve curve = representative_sweep(load_manifest(path), 1, 3);
  REQUIRE(curve.entries.size() == 3);
  CHECK(curve.entries[0].k == 1);
  CHECK(curve.entries[2].k == 3);
  // Seeded by the first non-random method in the manifest.
  CHECK(curve.seeding_used == "taneja(2,1)");
  // imgB has 4 distinct intensities; k = 3 partitions cannot cost more
  // than k = 1.
  CHECK(curve.entries[2].inertia <= curve.entries[0].inertia);
}
