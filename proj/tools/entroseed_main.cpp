#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "entroseed/bench.hpp"
#include "entroseed/elbow.hpp"
#include "entroseed/entropy.hpp"
#include "entroseed/image_io.hpp"
#include "entroseed/kmeans.hpp"
#include "entroseed/seeding.hpp"

namespace {

using namespace entroseed;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// Prints to stdout and, when requested, writes the identical text to a file.
void deliver(const std::string& text, const std::string& out_path) {
  std::fputs(text.c_str(), stdout);
  if (out_path.empty()) return;
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError(out_path + ": cannot open output file");
  f << text;
  f.flush();
  if (!f) throw IoError(out_path + ": write failed");
}

const std::vector<std::string> kMeasureNames = {
    "shannon",        "kapur",  "aczel-daroczy",
    "havrda-charvat", "taneja", "sharma-mittal"};

struct MeasureCli {
  std::string measure = "shannon";
  std::optional<double> alpha;
  std::optional<double> beta;

  EntropySpec spec() const {
    EntropySpec s = default_spec(*parse_measure(measure));
    if (alpha) s.alpha = *alpha;
    if (beta) s.beta = *beta;
    return s;
  }
};

void add_measure_options(CLI::App* cmd, MeasureCli& cli) {
  cmd->add_option("--measure", cli.measure, "Entropy measure")
      ->check(CLI::IsMember(kMeasureNames, CLI::ignore_case))
      ->capture_default_str();
  cmd->add_option("--alpha", cli.alpha,
                  "Measure parameter α (default per measure)");
  cmd->add_option("--beta", cli.beta,
                  "Measure parameter β (default per measure)");
}

struct SeedCli {
  std::string image;
  MeasureCli measure;
  int k = 2;
  double th = -1.0;
  bool strict = false;
  bool grayscale = false;
};

void add_seed_options(CLI::App* cmd, SeedCli& cli) {
  cmd->add_option("--image", cli.image, "Input image (PNG/JPEG/PPM/PGM)")
      ->required();
  add_measure_options(cmd, cli.measure);
  cmd->add_option("--k", cli.k, "Number of centroids")->required();
  cmd->add_option("--th", cli.th,
                  "Seed separation threshold (default 0.5*255*sqrt(channels))");
  cmd->add_flag("--strict", cli.strict,
                "Fail instead of halving th when seeding exhausts");
  cmd->add_flag("--grayscale", cli.grayscale,
                "Convert the image to grayscale before processing");
}

PixelGrid load_for(const SeedCli& cli) {
  PixelGrid grid = load_image(cli.image);
  if (cli.grayscale) grid = to_grayscale(grid);
  return grid;
}

CentroidSet seed_for(const PixelGrid& grid, const SeedCli& cli) {
  SeedingConfig config;
  config.k = cli.k;
  config.th = cli.th;
  config.spec = cli.measure.spec();
  config.exhaustion_policy =
      cli.strict ? ExhaustionPolicy::Strict : ExhaustionPolicy::Adaptive;
  return entropy_seed(grid, config);
}

std::string describe_seed(const SeedCli& cli, const CentroidSet& seeds) {
  std::ostringstream out;
  out << "image: " << cli.image << '\n';
  out << "method: " << seeds.method_tag << '\n';
  out << "k: " << seeds.k() << '\n';
  out << "effective_th: " << fmt("%.10g", seeds.effective_th) << '\n';
  out << "init_time_s: " << fmt("%.6g", seeds.init_time) << '\n';
  for (Eigen::Index i = 0; i < seeds.points.rows(); ++i) {
    out << "centroid " << i << ':';
    for (Eigen::Index c = 0; c < seeds.points.cols(); ++c)
      out << ' ' << fmt("%.10g", seeds.points(i, c));
    out << '\n';
  }
  if (seeds.points.rows() > 1)
    out << "min_pairwise_distance: "
        << fmt("%.10g", min_pairwise_distance(seeds.points)) << '\n';
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Parametric-entropy centroid seeding for k-means on images"};
  app.require_subcommand(1);

  // --- entropy ---------------------------------------------------------
  auto* entropy_cmd = app.add_subcommand(
      "entropy", "Evaluate an entropy measure on a probability vector");
  MeasureCli entropy_measure;
  std::string probs_text;
  std::string entropy_out;
  entropy_cmd
      ->add_option("--probs", probs_text,
                   "Comma-separated probabilities, e.g. 0.25,0.25,0.5")
      ->required();
  add_measure_options(entropy_cmd, entropy_measure);
  entropy_cmd->add_option("--out", entropy_out, "Also write the result here");

  // --- seed ------------------------------------------------------------
  auto* seed_cmd =
      app.add_subcommand("seed", "Entropy-guided centroid seeding");
  SeedCli seed_cli;
  std::string seed_out;
  add_seed_options(seed_cmd, seed_cli);
  seed_cmd->add_option("--out", seed_out, "Also write the result here");

  // --- cluster ---------------------------------------------------------
  auto* cluster_cmd = app.add_subcommand(
      "cluster", "Seed with an entropy measure, then run k-means");
  SeedCli cluster_cli;
  std::string cluster_out;
  int max_iter = 300;
  double tol = 1e-4;
  std::string empty_policy = "reseed";
  add_seed_options(cluster_cmd, cluster_cli);
  cluster_cmd->add_option("--max-iter", max_iter, "Iteration cap")
      ->capture_default_str();
  cluster_cmd
      ->add_option("--tol", tol, "Centroid-shift convergence threshold")
      ->capture_default_str();
  cluster_cmd
      ->add_option("--empty-policy", empty_policy,
                   "Empty-cluster handling: reseed or error")
      ->check(CLI::IsMember({"reseed", "error"}))
      ->capture_default_str();
  cluster_cmd->add_option("--out", cluster_out, "Also write the result here");

  // --- elbow -----------------------------------------------------------
  auto* elbow_cmd = app.add_subcommand(
      "elbow", "Sweep k and report the elbow of the SSE curve");
  SeedCli elbow_cli;
  elbow_cmd
      ->add_option("--image", elbow_cli.image,
                   "Input image (PNG/JPEG/PPM/PGM)")
      ->required();
  add_measure_options(elbow_cmd, elbow_cli.measure);
  elbow_cmd->add_option("--th", elbow_cli.th, "Seed separation threshold");
  elbow_cmd->add_flag("--grayscale", elbow_cli.grayscale,
                      "Convert the image to grayscale before processing");
  int k_min = 1, k_max = 8;
  std::string cost_name = "inertia";
  std::optional<std::uint64_t> random_init;
  std::string elbow_out;
  elbow_cmd->add_option("--k-min", k_min, "Smallest k")
      ->capture_default_str();
  elbow_cmd->add_option("--k-max", k_max, "Largest k")->capture_default_str();
  elbow_cmd
      ->add_option("--cost", cost_name, "Curve column: inertia or dispersion")
      ->check(CLI::IsMember({"inertia", "dispersion"}))
      ->capture_default_str();
  elbow_cmd->add_option(
      "--random-init", random_init,
      "Seed each k randomly with this RNG seed instead of the entropy seeder");
  elbow_cmd->add_option("--out", elbow_out, "Also write the curve here");

  // --- bench -----------------------------------------------------------
  auto* bench_cmd = app.add_subcommand(
      "bench", "Benchmark initializers over a dataset manifest");
  std::string manifest_path;
  std::string format_name = "markdown";
  std::string bench_out;
  std::string sweep_out;
  int bench_kmin = 1, bench_kmax = 8;
  BenchOptions bench_options;
  bench_cmd->add_option("--manifest", manifest_path, "Dataset manifest file")
      ->required();
  bench_cmd
      ->add_option("--format", format_name, "Report format")
      ->check(CLI::IsMember({"csv", "json", "markdown"}))
      ->capture_default_str();
  bench_cmd
      ->add_option("--threads", bench_options.threads,
                   "Worker threads (0 = ENTROSEED_THREADS or hardware)")
      ->capture_default_str();
  bench_cmd->add_option("--max-iter", bench_options.kmeans.max_iter,
                        "k-means iteration cap")
      ->capture_default_str();
  bench_cmd->add_option("--tol", bench_options.kmeans.tol,
                        "k-means convergence threshold")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "Also write the report here");
  bench_cmd->add_option("--elbow-out", sweep_out,
                        "Write a representative-image elbow curve here");
  bench_cmd->add_option("--k-min", bench_kmin, "Elbow sweep smallest k")
      ->capture_default_str();
  bench_cmd->add_option("--k-max", bench_kmax, "Elbow sweep largest k")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (entropy_cmd->parsed()) {
    std::vector<double> values;
    std::stringstream stream(probs_text);
    std::string item;
    while (std::getline(stream, item, ',')) {
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw DomainError("not a probability: '" + item + "'");
      }
    }
    Eigen::ArrayXd p(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) p[i] = values[i];
    const EntropySpec spec = entropy_measure.spec();
    const double value = evaluate(spec, ProbabilityVector(p));
    std::ostringstream out;
    out << "measure: " << spec_label(spec) << '\n';
    out << "value: " << fmt("%.12g", value) << '\n';
    deliver(out.str(), entropy_out);
    return 0;
  }

  if (seed_cmd->parsed()) {
    const PixelGrid grid = load_for(seed_cli);
    const CentroidSet seeds = seed_for(grid, seed_cli);
    deliver(describe_seed(seed_cli, seeds), seed_out);
    return 0;
  }

  if (cluster_cmd->parsed()) {
    const PixelGrid grid = load_for(cluster_cli);
    const CentroidSet seeds = seed_for(grid, cluster_cli);
    KMeansConfig config;
    config.max_iter = max_iter;
    config.tol = tol;
    config.empty_cluster_policy = empty_policy == "error"
                                      ? EmptyClusterPolicy::DropError
                                      : EmptyClusterPolicy::ReseedFarthest;
    const Eigen::MatrixXd points = feature_matrix(grid);
    const KMeansResult result = fit(points, seeds, config);

    std::ostringstream out;
    out << describe_seed(cluster_cli, seeds);
    out << "nik: " << result.nik << '\n';
    out << "sse: " << fmt("%.12g", result.sse) << '\n';
    out << "compute_time_s: " << fmt("%.6g", result.compute_time) << '\n';
    out << "total_time_s: "
        << fmt("%.6g", seeds.init_time + result.compute_time) << '\n';
    Eigen::VectorXi sizes = Eigen::VectorXi::Zero(seeds.k());
    for (Eigen::Index i = 0; i < result.labels.size(); ++i)
      sizes[result.labels[i]] += 1;
    out << "cluster_sizes:";
    for (Eigen::Index c = 0; c < sizes.size(); ++c) out << ' ' << sizes[c];
    out << '\n';
    out << "final centroids:\n";
    for (Eigen::Index i = 0; i < result.centroids.rows(); ++i) {
      out << "centroid " << i << ':';
      for (Eigen::Index c = 0; c < result.centroids.cols(); ++c)
        out << ' ' << fmt("%.10g", result.centroids(i, c));
      out << '\n';
    }
    deliver(out.str(), cluster_out);
    return 0;
  }

  if (elbow_cmd->parsed()) {
    const PixelGrid grid = load_for(elbow_cli);
    const Eigen::MatrixXd points = feature_matrix(grid);
    Seeder seeder;
    if (random_init) {
      seeder = [&](int k) { return random_seed(grid, k, *random_init); };
    } else {
      seeder = [&](int k) {
        SeedingConfig config;
        config.k = k;
        config.th = elbow_cli.th;
        config.spec = elbow_cli.measure.spec();
        return entropy_seed(grid, config);
      };
    }
    const ElbowCurve curve = k_sweep(points, k_min, k_max, seeder);
    const ElbowCost cost = cost_name == "dispersion" ? ElbowCost::Dispersion
                                                     : ElbowCost::Inertia;
    std::ostringstream out;
    out << "seeding: " << curve.seeding_used << '\n';
    write_curve(curve, out, cost);
    const auto suggestion = detect_elbow(curve);
    if (suggestion)
      out << "suggested_k: " << *suggestion << '\n';
    else
      out << "suggested_k: none\n";
    deliver(out.str(), elbow_out);
    return 0;
  }

  // bench
  const DatasetManifest manifest = load_manifest(manifest_path);
  const BenchReport report = run_benchmark(manifest, bench_options);
  ReportFormat format = ReportFormat::Markdown;
  if (format_name == "csv") format = ReportFormat::Csv;
  if (format_name == "json") format = ReportFormat::Json;
  deliver(emit_report(report, format), bench_out);
  if (!sweep_out.empty()) {
    const ElbowCurve curve =
        representative_sweep(manifest, bench_kmin, bench_kmax,
                             bench_options.kmeans);
    std::ostringstream out;
    write_curve(curve, out);
    std::ofstream f(sweep_out, std::ios::binary);
    if (!f) throw IoError(sweep_out + ": cannot open output file");
    f << out.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
