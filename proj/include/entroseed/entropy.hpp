#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <string>

#include "entroseed/errors.hpp"
#include "entroseed/pixel_grid.hpp"

namespace entroseed {

enum class Measure {
  Shannon,
  Kapur,
  AczelDaroczy,
  HavrdaCharvat,
  Taneja,
  SharmaMittal,
};

// Measure plus its (alpha, beta) parameters. Shannon ignores both;
// Havrda-Charvat ignores beta.
struct EntropySpec {
  Measure measure = Measure::Shannon;
  double alpha = 2.0;
  double beta = 2.0;
};

// Parameter-free measure name ("shannon", "sharma-mittal", ...).
std::string measure_name(Measure m);

// Inverse of measure_name, case-insensitive. nullopt for unknown names.
std::optional<Measure> parse_measure(const std::string& name);

// Per-measure default parameters (alpha = 2 everywhere; beta = 2 for Kapur
// and Sharma-Mittal, 1 for Taneja, 0.5 for Aczel-Daroczy).
EntropySpec default_spec(Measure m);

// nullopt if the spec satisfies its measure's constraint set, otherwise the
// violated constraint, e.g. "α ≠ 1".
std::optional<std::string> validate(const EntropySpec& spec);

// Display label including parameters: "shannon", "havrda-charvat(2)",
// "taneja(2,1)". Parameters are printed with %g.
std::string spec_label(const EntropySpec& spec);

// The entropy measures as free functions over Eigen array expressions.
// Preconditions: every entry strictly positive and at most 1; parameters
// within the measure's constraint set (see validate). Use evaluate() for the
// checked entry point.

template <typename Derived>
typename Derived::Scalar shannon(const Eigen::ArrayBase<Derived>& p) {
  return -(p * p.log2()).sum();
}

template <typename Derived>
typename Derived::Scalar kapur(const Eigen::ArrayBase<Derived>& p,
                               typename Derived::Scalar alpha,
                               typename Derived::Scalar beta) {
  using Scalar = typename Derived::Scalar;
  const Scalar num = p.pow(alpha + beta - 1).sum();
  const Scalar den = p.pow(beta).sum();
  return std::log2(num / den) / (Scalar(1) - alpha);
}

template <typename Derived>
typename Derived::Scalar aczel_daroczy(const Eigen::ArrayBase<Derived>& p,
                                       typename Derived::Scalar alpha,
                                       typename Derived::Scalar beta) {
  using Scalar = typename Derived::Scalar;
  const auto pa = p.pow(alpha);
  const auto blog = beta * p.log();
  const Scalar num = (pa * blog.sin()).sum();
  const Scalar den = (pa * blog.cos()).sum();
  if (den == Scalar(0))
    throw SingularityError("aczel-daroczy denominator Σ p^α cos(β ln p) is zero");
  return std::atan(num / den) / beta;
}

template <typename Derived>
typename Derived::Scalar havrda_charvat(const Eigen::ArrayBase<Derived>& p,
                                        typename Derived::Scalar alpha) {
  using Scalar = typename Derived::Scalar;
  return (p.pow(alpha).sum() - Scalar(1)) /
         (std::exp2(Scalar(1) - alpha) - Scalar(1));
}

template <typename Derived>
typename Derived::Scalar taneja(const Eigen::ArrayBase<Derived>& p,
                                typename Derived::Scalar alpha,
                                typename Derived::Scalar beta) {
  using Scalar = typename Derived::Scalar;
  const Scalar sum = (p.pow(alpha) * (beta * p.log()).sin()).sum();
  return -std::exp2(alpha - Scalar(1)) / std::sin(beta) * sum;
}

template <typename Derived>
typename Derived::Scalar sharma_mittal(const Eigen::ArrayBase<Derived>& p,
                                       typename Derived::Scalar alpha,
                                       typename Derived::Scalar beta) {
  using Scalar = typename Derived::Scalar;
  const Scalar sum = p.pow(beta).sum();
  return (std::pow(sum, (alpha - Scalar(1)) / (beta - Scalar(1))) - Scalar(1)) /
         (std::exp2(Scalar(1) - alpha) - Scalar(1));
}

// Strictly positive probabilities summing to at most 1 (+1e-9 slack).
// Construction rejects anything else with DomainError.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(Eigen::ArrayXd values);

  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

 private:
  Eigen::ArrayXd values_;
};

// Validates the spec (SpecViolation carrying the constraint text on failure)
// and evaluates the selected measure.
double evaluate(const EntropySpec& spec, const ProbabilityVector& p);

// Per-pixel seeding scores: each pixel's leave-one-term-out marginal
// contribution s(t) = H(T) - H(T \ t) over the grid's support distribution.
// Pixels sharing an intensity tuple receive identical scores.
Eigen::ArrayXd pixel_scores(const PixelGrid& grid, const EntropySpec& spec);

}  // namespace entroseed
