#include "entroseed/elbow.hpp"

#include <cstdio>

#include "entroseed/errors.hpp"

namespace entroseed {

ElbowCurve k_sweep(const Eigen::MatrixXd& points, int k_min, int k_max,
                   const Seeder& seeder, const KMeansConfig& config) {
  if (k_min < 1) throw DomainError("k_min must be at least 1");
  if (k_max < k_min) throw DomainError("k_max must be at least k_min");
  if (points.rows() < 1) throw DomainError("no points to sweep");
  if (!seeder) throw DomainError("no seeder supplied");

  ElbowCurve curve;
  curve.entries.reserve(k_max - k_min + 1);
  for (int k = k_min; k <= k_max; ++k) {
    const CentroidSet init = seeder(k);
    if (curve.seeding_used.empty()) curve.seeding_used = init.method_tag;
    const KMeansResult result = fit(points, init, config);
    curve.entries.push_back(
        {k, result.sse, result.sse / static_cast<double>(points.rows())});
  }
  return curve;
}

std::optional<int> detect_elbow(const ElbowCurve& curve) {
  const auto& e = curve.entries;
  if (e.size() < 3)
    throw DomainError("elbow detection needs at least 3 curve entries");
  double best = 0.0;
  std::optional<int> best_k;
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    const double d2 =
        e[i - 1].inertia - 2.0 * e[i].inertia + e[i + 1].inertia;
    if (d2 > best) {
      best = d2;
      best_k = e[i].k;
    }
  }
  return best_k;
}

void write_curve(const ElbowCurve& curve, std::ostream& out, ElbowCost cost) {
  char buf[64];
  for (const ElbowEntry& entry : curve.entries) {
    const double value =
        cost == ElbowCost::Inertia ? entry.inertia : entry.dispersion;
    std::snprintf(buf, sizeof(buf), "%d\t%.6g\n", entry.k, value);
    out << buf;
  }
}

}  // namespace entroseed
