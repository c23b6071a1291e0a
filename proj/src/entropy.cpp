#include "entroseed/entropy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "entroseed/pixel_model.hpp"

namespace entroseed {

std::string measure_name(Measure m) {
  switch (m) {
    case Measure::Shannon: return "shannon";
    case Measure::Kapur: return "kapur";
    case Measure::AczelDaroczy: return "aczel-daroczy";
    case Measure::HavrdaCharvat: return "havrda-charvat";
    case Measure::Taneja: return "taneja";
    case Measure::SharmaMittal: return "sharma-mittal";
  }
  return "?";
}

std::optional<Measure> parse_measure(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (Measure m : {Measure::Shannon, Measure::Kapur, Measure::AczelDaroczy,
                    Measure::HavrdaCharvat, Measure::Taneja,
                    Measure::SharmaMittal}) {
    if (lower == measure_name(m)) return m;
  }
  return std::nullopt;
}

EntropySpec default_spec(Measure m) {
  EntropySpec spec;
  spec.measure = m;
  spec.alpha = 2.0;
  switch (m) {
    case Measure::Taneja: spec.beta = 1.0; break;
    case Measure::AczelDaroczy: spec.beta = 0.5; break;
    default: spec.beta = 2.0; break;
  }
  return spec;
}

std::string spec_label(const EntropySpec& spec) {
  char buf[64];
  switch (spec.measure) {
    case Measure::Shannon:
      return "shannon";
    case Measure::HavrdaCharvat:
      std::snprintf(buf, sizeof(buf), "havrda-charvat(%g)", spec.alpha);
      return buf;
    default:
      std::snprintf(buf, sizeof(buf), "%s(%g,%g)",
                    measure_name(spec.measure).c_str(), spec.alpha, spec.beta);
      return buf;
  }
}

namespace {

// β within 1e-9 of a multiple of π makes 1/sin β effectively singular.
bool near_pi_multiple(double beta) {
  const double k = std::round(beta / M_PI);
  return std::abs(beta - k * M_PI) < 1e-9;
}

}  // namespace

std::optional<std::string> validate(const EntropySpec& spec) {
  const double a = spec.alpha;
  const double b = spec.beta;
  switch (spec.measure) {
    case Measure::Shannon:
      return std::nullopt;
    case Measure::Kapur:
      if (!(a > 0)) return "α > 0";
      if (a == 1.0) return "α ≠ 1";
      if (!(b >= 1)) return "β ≥ 1";
      return std::nullopt;
    case Measure::AczelDaroczy:
      if (!(a > 0)) return "α > 0";
      if (b == 0.0) return "β ≠ 0";
      return std::nullopt;
    case Measure::HavrdaCharvat:
      if (!(a > 0)) return "α > 0";
      if (a == 1.0) return "α ≠ 1";
      return std::nullopt;
    case Measure::Taneja:
      if (!(a > 0)) return "α > 0";
      if (!(b > 0)) return "β > 0";
      if (near_pi_multiple(b)) return "β ≠ kπ";
      return std::nullopt;
    case Measure::SharmaMittal:
      if (!(a > 0)) return "α > 0";
      if (a == 1.0) return "α ≠ 1";
      if (!(b > 0)) return "β > 0";
      if (b == 1.0) return "β ≠ 1";
      return std::nullopt;
  }
  return "unknown measure";
}

ProbabilityVector::ProbabilityVector(Eigen::ArrayXd values)
    : values_(std::move(values)) {
  if (values_.size() == 0)
    throw DomainError("probability vector must be non-empty");
  if (!(values_ > 0.0).all() || !(values_ <= 1.0).all())
    throw DomainError("probabilities must lie in (0, 1]");
  if (values_.sum() > 1.0 + 1e-9)
    throw DomainError("probabilities must sum to at most 1");
}

double evaluate(const EntropySpec& spec, const ProbabilityVector& p) {
  if (auto violation = validate(spec)) throw SpecViolation(*violation);
  const Eigen::ArrayXd& v = p.values();
  switch (spec.measure) {
    case Measure::Shannon: return shannon(v);
    case Measure::Kapur: return kapur(v, spec.alpha, spec.beta);
    case Measure::AczelDaroczy:
      return aczel_daroczy(v, spec.alpha, spec.beta);
    case Measure::HavrdaCharvat: return havrda_charvat(v, spec.alpha);
    case Measure::Taneja: return taneja(v, spec.alpha, spec.beta);
    case Measure::SharmaMittal:
      return sharma_mittal(v, spec.alpha, spec.beta);
  }
  throw DomainError("unknown measure");
}

namespace {

// Leave-one-term-out scores per distinct tuple. For the sum-form measures
// H(T) - H(T\t) collapses to the summand; the ratio/power forms need the
// global accumulators. A single-tuple support has no defined H(T\t) for the
// latter group, so the score is H(T) there (any shared constant preserves
// the equal-scores contract).
std::vector<double> support_scores(const SupportDistribution& support,
                                   const EntropySpec& spec) {
  const std::size_t n = support.entries.size();
  std::vector<double> scores(n);
  const double a = spec.alpha;
  const double b = spec.beta;

  switch (spec.measure) {
    case Measure::Shannon: {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = support.entries[i].probability;
        scores[i] = -p * std::log2(p);
      }
      break;
    }
    case Measure::HavrdaCharvat: {
      const double norm = std::exp2(1.0 - a) - 1.0;
      for (std::size_t i = 0; i < n; ++i)
        scores[i] = std::pow(support.entries[i].probability, a) / norm;
      break;
    }
    case Measure::Taneja: {
      const double factor = -std::exp2(a - 1.0) / std::sin(b);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = support.entries[i].probability;
        scores[i] = factor * std::pow(p, a) * std::sin(b * std::log(p));
      }
      break;
    }
    case Measure::Kapur: {
      double num = 0.0, den = 0.0;
      for (const auto& e : support.entries) {
        num += std::pow(e.probability, a + b - 1.0);
        den += std::pow(e.probability, b);
      }
      const double total = std::log2(num / den) / (1.0 - a);
      for (std::size_t i = 0; i < n; ++i) {
        if (n == 1) {
          scores[i] = total;
          continue;
        }
        const double p = support.entries[i].probability;
        const double rest_num = num - std::pow(p, a + b - 1.0);
        const double rest_den = den - std::pow(p, b);
        scores[i] = total - std::log2(rest_num / rest_den) / (1.0 - a);
      }
      break;
    }
    case Measure::SharmaMittal: {
      const double norm = std::exp2(1.0 - a) - 1.0;
      const double expo = (a - 1.0) / (b - 1.0);
      double sum = 0.0;
      for (const auto& e : support.entries) sum += std::pow(e.probability, b);
      const double total = (std::pow(sum, expo) - 1.0) / norm;
      for (std::size_t i = 0; i < n; ++i) {
        if (n == 1) {
          scores[i] = total;
          continue;
        }
        const double rest = sum - std::pow(support.entries[i].probability, b);
        scores[i] = total - (std::pow(rest, expo) - 1.0) / norm;
      }
      break;
    }
    case Measure::AczelDaroczy: {
      std::vector<double> sins(n), coss(n);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = support.entries[i].probability;
        const double pa = std::pow(p, a);
        sins[i] = pa * std::sin(b * std::log(p));
        coss[i] = pa * std::cos(b * std::log(p));
        num += sins[i];
        den += coss[i];
      }
      if (den == 0.0)
        throw SingularityError(
            "aczel-daroczy denominator Σ p^α cos(β ln p) is zero");
      const double total = std::atan(num / den) / b;
      for (std::size_t i = 0; i < n; ++i) {
        if (n == 1) {
          scores[i] = total;
          continue;
        }
        const double rest_den = den - coss[i];
        if (rest_den == 0.0)
          throw SingularityError(
              "aczel-daroczy leave-one-out denominator is zero");
        scores[i] = total - std::atan((num - sins[i]) / rest_den) / b;
      }
      break;
    }
  }
  return scores;
}

}  // namespace

Eigen::ArrayXd pixel_scores(const PixelGrid& grid, const EntropySpec& spec) {
  if (auto violation = validate(spec)) throw SpecViolation(*violation);
  check_grid(grid);

  const SupportDistribution support = support_distribution(grid);
  const std::vector<double> scores = support_scores(support, spec);

  std::unordered_map<std::uint32_t, double> by_key;
  by_key.reserve(support.entries.size());
  for (std::size_t i = 0; i < support.entries.size(); ++i) {
    const auto& t = support.entries[i].tuple;
    std::uint32_t key = 0;
    for (int c = 0; c < support.channels; ++c) key = key << 8 | t[c];
    by_key.emplace(key, scores[i]);
  }

  const int n = grid.pixel_count();
  Eigen::ArrayXd out(n);
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* p = grid.pixel(i);
    std::uint32_t key = 0;
    for (int c = 0; c < grid.channels; ++c) key = key << 8 | p[c];
    out[i] = by_key.at(key);
  }
  return out;
}

}  // namespace entroseed
