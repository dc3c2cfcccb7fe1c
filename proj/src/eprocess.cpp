#include "anytime/eprocess.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anytime {

namespace {

double signed_sum(const ComparisonState& state, Direction dir) {
  return dir == Direction::pq ? state.sum_dhat : -state.sum_dhat;
}

void require_scale(const ComparisonState& state, double c) {
  if (!(c >= 2.0 * state.bound * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg << "e-process scale c=" << c << " is below twice the differential bound "
        << state.bound;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double log_e_mixture(const ComparisonState& state,
                     const GammaExponentialMixture& mixture, Direction dir) {
  require_scale(state, mixture.c());
  return mixture.log_m(signed_sum(state, dir), state.vhat);
}

double log_e_mixture(const ComparisonState& state, double rho, double c,
                     Direction dir) {
  return log_e_mixture(state, GammaExponentialMixture(rho, c), dir);
}

double e_mixture(const ComparisonState& state, double rho, double c, Direction dir) {
  return std::exp(log_e_mixture(state, rho, c, dir));
}

double log_e_fixed_lambda(const ComparisonState& state, double lambda, double c,
                          Direction dir) {
  require_scale(state, c);
  const Cgf cgf = Cgf::exponential(c);
  if (!(lambda >= 0.0 && lambda < cgf.lambda_max())) {
    throw std::domain_error("fixed-lambda e-process requires 0 <= lambda < 1/c");
  }
  return lambda * signed_sum(state, dir) - psi(cgf, lambda) * state.vhat;
}

double e_fixed_lambda(const ComparisonState& state, double lambda, double c,
                      Direction dir) {
  return std::exp(log_e_fixed_lambda(state, lambda, c, dir));
}

void EvidenceState::observe(double e) {
  if (!(e > 0.0)) {
    std::ostringstream msg;
    msg << "nonpositive e-value " << e << " at step " << count_ + 1;
    throw std::domain_error(msg.str());
  }
  observe_log(std::log(e));
}

void EvidenceState::observe_log(double log_e) {
  if (std::isnan(log_e) || log_e == -std::numeric_limits<double>::infinity()) {
    throw std::domain_error("nonpositive e-value in history");
  }
  ++count_;
  log_current_ = log_e;
  log_max_ = std::max(log_max_, log_e);
}

double EvidenceState::e_current() const { return std::exp(log_current_); }

double EvidenceState::e_running_max() const {
  return count_ == 0 ? 0.0 : std::exp(log_max_);
}

double p_process(const EvidenceState& ev) {
  if (ev.empty()) return 1.0;
  const double p = std::exp(-ev.log_e_running_max());
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

double p_process(std::span<const double> history) {
  EvidenceState ev;
  for (double e : history) ev.observe(e);
  return p_process(ev);
}

}  // namespace anytime
