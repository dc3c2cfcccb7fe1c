#pragma once

// e-processes for the weak one-sided nulls and their anytime-valid
// p-processes p_t = min(1, 1 / max_{i<=t} E_i).

#include <span>

#include "anytime/confseq.hpp"

namespace anytime {

/// pq tests H0: Delta_t <= 0 (p no better than q); qp tests -Delta_t <= 0.
enum class Direction { pq, qp };

/// Gamma-exponential mixture e-value m(+-sum dhat, V_hat). Requires c >= 2b.
double e_mixture(const ComparisonState& state, double rho, double c, Direction dir);
double log_e_mixture(const ComparisonState& state, double rho, double c,
                     Direction dir);
double log_e_mixture(const ComparisonState& state,
                     const GammaExponentialMixture& mixture, Direction dir);

/// exp(lambda s - psi_{E,c}(lambda) V_hat) for 0 <= lambda < 1/c.
double e_fixed_lambda(const ComparisonState& state, double lambda, double c,
                      Direction dir);
double log_e_fixed_lambda(const ComparisonState& state, double lambda, double c,
                          Direction dir);

/// Current e-value and its running maximum, tracked in log space.
class EvidenceState {
 public:
  explicit EvidenceState(Direction dir = Direction::pq) : direction_(dir) {}

  /// Throws std::domain_error for e <= 0.
  void observe(double e);
  void observe_log(double log_e);

  Direction direction() const { return direction_; }
  bool empty() const { return count_ == 0; }
  double e_current() const;
  double e_running_max() const;
  double log_e_running_max() const { return log_max_; }

 private:
  Direction direction_;
  std::size_t count_ = 0;
  double log_current_ = 0.0;
  double log_max_ = -std::numeric_limits<double>::infinity();
};

/// min(1, 1/e_running_max), floored at the smallest positive double.
double p_process(const EvidenceState& ev);

/// p-process at the end of an e-value history.
double p_process(std::span<const double> history);

}  // namespace anytime
