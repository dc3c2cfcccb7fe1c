#include "anytime/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace anytime {

namespace {

constexpr double kSimplexTol = 1e-9;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0,1], got " << p;
    throw std::domain_error(msg.str());
  }
}

void check_outcome(int y) {
  if (y != 0 && y != 1) {
    throw std::domain_error("binary outcome must be 0 or 1, got " +
                            std::to_string(y));
  }
}

double clamp_eps(double p, double eps) { return std::clamp(p, eps, 1.0 - eps); }

// Affine-in-r score shared by score() and score_at_mean(); brier is handled
// separately because its linear equivalent differs by a p-free term.
double affine_score(const ScoringRule& rule, double p, double r) {
  switch (rule.kind) {
    case ScoreKind::spherical:
      return (p * r + (1.0 - p) * (1.0 - r)) /
             std::sqrt(p * p + (1.0 - p) * (1.0 - p));
    case ScoreKind::zero_one:
      return p >= 0.5 ? r : 1.0 - r;
    case ScoreKind::log_truncated: {
      const double pc = clamp_eps(p, rule.epsilon);
      return r * std::log(pc) + (1.0 - r) * std::log(1.0 - pc);
    }
    default:
      break;
  }
  throw std::logic_error("affine_score: unsupported rule");
}

}  // namespace

ScoringRule ScoringRule::log_truncated(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("log score truncation must lie in (0, 0.5)");
  }
  ScoringRule r{ScoreKind::log_truncated};
  r.epsilon = epsilon;
  return r;
}

ScoringRule ScoringRule::winkler(double q0) {
  if (!(q0 > 0.0 && q0 < 1.0)) {
    throw std::invalid_argument("winkler q0 must lie in (0,1)");
  }
  ScoringRule r{ScoreKind::winkler};
  r.q0 = q0;
  return r;
}

double ScoringRule::diff_bound() const {
  switch (kind) {
    case ScoreKind::brier:
    case ScoreKind::spherical:
    case ScoreKind::zero_one:
      return 1.0;
    case ScoreKind::log_truncated:
      return std::log((1.0 - epsilon) / epsilon);
    case ScoreKind::winkler: {
      // w lies in [1 - 2/m, 1] with m = min(q0, 1-q0).
      const double m = std::min(q0, 1.0 - q0);
      return std::max(1.0, 2.0 / m - 1.0);
    }
  }
  return 1.0;
}

std::string ScoringRule::name() const {
  switch (kind) {
    case ScoreKind::brier:
      return "brier";
    case ScoreKind::spherical:
      return "spherical";
    case ScoreKind::zero_one:
      return "zero-one";
    case ScoreKind::log_truncated:
      return "log";
    case ScoreKind::winkler:
      return "winkler";
  }
  return "?";
}

ScoringRule parse_scoring_rule(std::string_view name, double epsilon) {
  if (name == "brier") return ScoringRule::brier();
  if (name == "spherical") return ScoringRule::spherical();
  if (name == "zero-one" || name == "zero_one") return ScoringRule::zero_one();
  if (name == "log" || name == "log-truncated") {
    return ScoringRule::log_truncated(epsilon);
  }
  throw std::invalid_argument("unknown scoring rule '" + std::string(name) +
                              "'");
}

KStepWeights::KStepWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw std::invalid_argument("k-step weights: K must be >= 1");
  for (double x : w_) {
    if (!(x >= 0.0)) {
      throw std::invalid_argument("k-step weights must be nonnegative");
    }
  }
  const double total = std::accumulate(w_.begin(), w_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("k-step weights must sum to 1");
  }
}

double score(const ScoringRule& rule, double p, int y) {
  check_probability(p, "forecast");
  check_outcome(y);
  if (rule.kind == ScoreKind::winkler) {
    throw std::domain_error("winkler is a two-forecast score; use winkler_score");
  }
  if (rule.kind == ScoreKind::brier) {
    const double d = p - y;
    return -d * d;
  }
  return affine_score(rule, p, static_cast<double>(y));
}

double score_at_mean(const ScoringRule& rule, double p, double r) {
  check_probability(p, "forecast");
  check_probability(r, "outcome mean");
  if (rule.kind == ScoreKind::winkler) {
    throw std::domain_error("winkler is a two-forecast score; use winkler_at_mean");
  }
  if (rule.kind == ScoreKind::brier) {
    const double d = p - r;
    return -d * d;
  }
  return affine_score(rule, p, r);
}

double winkler_normalizer(double p, double q) {
  // Brier: S(p,1)-S(q,1) = (1-q)^2-(1-p)^2 and S(p,0)-S(q,0) = q^2-p^2.
  if (p >= q) return (1.0 - q) * (1.0 - q) - (1.0 - p) * (1.0 - p);
  return q * q - p * p;
}

namespace {

void check_winkler(const ScoringRule& rule, double p, double q) {
  if (rule.kind != ScoreKind::winkler) {
    throw std::invalid_argument("winkler_score requires a winkler rule");
  }
  check_probability(p, "forecast");
  check_probability(q, "baseline forecast");
  if (!(q > rule.q0 && q < 1.0 - rule.q0)) {
    std::ostringstream msg;
    msg << "winkler baseline must lie in (" << rule.q0 << ", "
        << 1.0 - rule.q0 << "), got " << q;
    throw std::domain_error(msg.str());
  }
}

}  // namespace

double winkler_at_mean(const ScoringRule& rule, double p, double q, double r) {
  check_winkler(rule, p, q);
  check_probability(r, "outcome mean");
  const double denom = winkler_normalizer(p, q);
  if (p == q) return 0.0;  // 0/0 := 0
  const double brier_p = -(p - r) * (p - r);
  const double brier_q = -(q - r) * (q - r);
  return (brier_p - brier_q) / denom;
}

double winkler_score(const ScoringRule& rule, double p, double q, int y) {
  check_outcome(y);
  return winkler_at_mean(rule, p, q, static_cast<double>(y));
}

PointwiseDifferential pointwise_diff(const ScoringRule& rule, double p,
                                     double q, int y) {
  if (rule.kind == ScoreKind::winkler) {
    return {winkler_score(rule, p, q, y), rule.diff_bound()};
  }
  return {score(rule, p, y) - score(rule, q, y), rule.diff_bound()};
}

double expected_diff(const ScoringRule& rule, double p, double q, double r) {
  if (rule.kind == ScoreKind::winkler) return winkler_at_mean(rule, p, q, r);
  return score_at_mean(rule, p, r) - score_at_mean(rule, q, r);
}

double categorical_score(const ScoringRule& rule, std::span<const double> p,
                         std::span<const double> y) {
  if (p.size() != y.size() || p.empty()) {
    throw std::domain_error("categorical forecast and outcome sizes differ");
  }
  double total = 0.0;
  for (double x : p) {
    if (!(x >= -kSimplexTol && x <= 1.0 + kSimplexTol)) {
      throw std::domain_error("categorical forecast entry outside [0,1]");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kSimplexTol) {
    throw std::domain_error("categorical forecast does not sum to 1");
  }
  std::size_t ones = 0;
  std::size_t hot = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] == 1.0) {
      ++ones;
      hot = k;
    } else if (y[k] != 0.0) {
      throw std::domain_error("categorical outcome is not one-hot");
    }
  }
  if (ones != 1) throw std::domain_error("categorical outcome is not one-hot");

  std::vector<double> pn(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    pn[k] = std::clamp(p[k], 0.0, 1.0) / total;
  }

  switch (rule.kind) {
    case ScoreKind::brier: {
      double s = 0.0;
      for (std::size_t k = 0; k < pn.size(); ++k) {
        const double d = pn[k] - y[k];
        s += d * d;
      }
      return -s;
    }
    case ScoreKind::spherical: {
      double norm = 0.0;
      for (double x : pn) norm += x * x;
      return pn[hot] / std::sqrt(norm);
    }
    case ScoreKind::zero_one:
      return pn[hot] >= 0.5 ? 1.0 : 0.0;
    case ScoreKind::log_truncated:
      return std::log(clamp_eps(pn[hot], rule.epsilon));
    case ScoreKind::winkler:
      break;
  }
  throw std::domain_error("winkler is not defined for categorical outcomes");
}

double categorical_diff_bound(const ScoringRule& rule) {
  switch (rule.kind) {
    case ScoreKind::brier:
      return 2.0;
    case ScoreKind::winkler:
      throw std::domain_error("winkler is not defined for categorical outcomes");
    default:
      return rule.diff_bound();
  }
}

double kstep_score(const ScoringRule& rule, const KStepWeights& weights,
                   std::span<const double> p, int y) {
  if (p.size() != weights.size()) {
    throw std::invalid_argument("k-step forecasts: expected " +
                                std::to_string(weights.size()) +
                                " horizons, got " + std::to_string(p.size()));
  }
  double s = 0.0;
  const auto w = weights.values();
  for (std::size_t k = 0; k < p.size(); ++k) s += w[k] * score(rule, p[k], y);
  return s;
}

}  // namespace anytime
