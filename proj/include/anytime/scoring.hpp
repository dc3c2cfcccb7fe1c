#pragma once

// Proper scoring rules for probability forecasts, positively oriented
// (larger is better), and the pointwise score differentials built on them.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anytime {

enum class ScoreKind { brier, spherical, zero_one, log_truncated, winkler };

/// A scoring rule together with the half-width of its differential range.
///
/// `winkler` is the normalized Brier differential against a baseline
/// forecaster restricted to (q0, 1 - q0); it is a function of (p, q, y)
/// rather than (p, y) and only `pointwise_diff` / `winkler_score` accept it.
struct ScoringRule {
  ScoreKind kind = ScoreKind::brier;
  double epsilon = 0.01;  // log_truncated: forecasts clamped to [eps, 1-eps]
  double q0 = 0.1;        // winkler: baseline confined to (q0, 1-q0)

  static ScoringRule brier() { return {ScoreKind::brier}; }
  static ScoringRule spherical() { return {ScoreKind::spherical}; }
  static ScoringRule zero_one() { return {ScoreKind::zero_one}; }
  static ScoringRule log_truncated(double epsilon = 0.01);
  static ScoringRule winkler(double q0);

  /// c/2 such that every pointwise differential satisfies |dhat| <= c/2.
  double diff_bound() const;
  std::string name() const;
};

/// Accepts "brier", "spherical", "zero-one", "log" (truncated, default eps).
ScoringRule parse_scoring_rule(std::string_view name, double epsilon = 0.01);

/// Convex weights over forecast horizons 1..K.
class KStepWeights {
 public:
  explicit KStepWeights(std::vector<double> w);
  std::span<const double> values() const { return w_; }
  std::size_t size() const { return w_.size(); }

 private:
  std::vector<double> w_;
};

struct PointwiseDifferential {
  double value = 0.0;
  double bound = 0.0;
};

double score(const ScoringRule& rule, double p, int y);

/// S(p, r): the score with the outcome slot replaced by its mean r in [0,1].
/// Brier uses -(p-r)^2; the other rules are affine in the outcome.
double score_at_mean(const ScoringRule& rule, double p, double r);

PointwiseDifferential pointwise_diff(const ScoringRule& rule, double p,
                                     double q, int y);

/// The conditional mean of the pointwise differential when y ~ Bern(r):
/// S(p,r) - S(q,r), or w(p,q,r) for the Winkler rule.
double expected_diff(const ScoringRule& rule, double p, double q, double r);

/// Normalizer T(p,q) of the Winkler score (Brier base).
double winkler_normalizer(double p, double q);

/// w(p, q, y) with 0/0 := 0. `rule` must be a winkler rule.
double winkler_score(const ScoringRule& rule, double p, double q, int y);

/// Winkler score with a fractional outcome r in [0,1].
double winkler_at_mean(const ScoringRule& rule, double p, double q, double r);

/// Score of a probability vector against a one-hot outcome.
double categorical_score(const ScoringRule& rule, std::span<const double> p,
                         std::span<const double> y);

/// Half-width of categorical differentials (Brier spans [-2, 0]).
double categorical_diff_bound(const ScoringRule& rule);

/// Weighted score of K forecasts of the same outcome.
double kstep_score(const ScoringRule& rule, const KStepWeights& weights,
                   std::span<const double> p, int y);

}  // namespace anytime
