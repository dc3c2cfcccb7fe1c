#include "anytime/confseq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anytime {

namespace {

constexpr double kBoundSlack = 1e-12;

void require_data(const ComparisonState& state) {
  if (state.t == 0) {
    throw std::invalid_argument("confidence sequence requires at least one observation");
  }
}

// Delta_t is an average of values in [-b, b]; the clip never excludes it.
ConfInterval centered(const ComparisonState& state, double radius) {
  const double limit = 2.0 * state.bound;
  return {std::clamp(state.delta_hat - radius, -limit, limit),
          std::clamp(state.delta_hat + radius, -limit, limit)};
}

}  // namespace

ComparisonState ComparisonState::fresh(double bound, Centering centering) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("differential bound must be positive");
  }
  ComparisonState s;
  s.bound = bound;
  s.centering = centering;
  return s;
}

ComparisonState update(const ComparisonState& state, double dhat) {
  if (!(std::abs(dhat) <= state.bound + kBoundSlack)) {
    std::ostringstream msg;
    msg << "score differential " << dhat << " at t=" << state.t + 1
        << " exceeds bound " << state.bound;
    throw std::domain_error(msg.str());
  }
  ComparisonState next = state;
  next.t = state.t + 1;
  next.sum_dhat = state.sum_dhat + dhat;
  next.delta_hat = next.sum_dhat / static_cast<double>(next.t);
  const double r = dhat - state.gamma_next;
  next.vhat = state.vhat + r * r;
  next.gamma_next = state.centering == Centering::mean
                        ? std::clamp(next.delta_hat, -state.bound, state.bound)
                        : 0.0;
  return next;
}

ConfInterval cs_hoeffding(const ComparisonState& state,
                          const UniformBoundary& boundary) {
  require_data(state);
  if (!boundary.sub_gaussian()) {
    throw std::invalid_argument("Hoeffding CS requires a sub-Gaussian boundary");
  }
  const double t = static_cast<double>(state.t);
  const double b = state.bound;
  double numerator = 0.0;
  if (boundary.kind() == BoundaryKind::stitched95) {
    numerator = 2.0 * b * boundary(t);
  } else {
    numerator = boundary(t * b * b);
  }
  return centered(state, numerator / t);
}

ConfInterval cs_eb(const ComparisonState& state, const UniformBoundary& boundary) {
  return cs_eb(state, boundary, -std::numeric_limits<double>::infinity());
}

ConfInterval cs_eb(const ComparisonState& state, const UniformBoundary& boundary,
                   double lower_hint, double* radius_numerator) {
  require_data(state);
  if (!boundary.sub_exponential()) {
    throw std::invalid_argument("empirical-Bernstein CS requires a sub-exponential boundary");
  }
  const double t = static_cast<double>(state.t);
  const double b = state.bound;
  double numerator = 0.0;
  if (boundary.kind() == BoundaryKind::stitched95) {
    numerator = 2.0 * b * boundary(state.vhat / (b * b));
  } else {
    if (!(boundary.c() >= 2.0 * b * (1.0 - 1e-12))) {
      throw std::invalid_argument(
          "gamma-exponential boundary scale must be at least twice the differential bound");
    }
    numerator = boundary(state.vhat, lower_hint);
  }
  if (radius_numerator != nullptr) *radius_numerator = numerator;
  return centered(state, numerator / t);
}

ConfInterval intersect(const ConfInterval& a, const ConfInterval& b) {
  const double lo = std::max(a.lower, b.lower);
  const double hi = std::min(a.upper, b.upper);
  if (lo <= hi) return {lo, hi};
  const double mid = 0.5 * (lo + hi);
  return {mid, mid};
}

Decision decide(const ConfInterval& ci) {
  if (ci.lower > 0.0) return Decision::p_better;
  if (ci.upper < 0.0) return Decision::q_better;
  return Decision::undecided;
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::p_better:
      return "p_better";
    case Decision::q_better:
      return "q_better";
    case Decision::undecided:
      return "undecided";
  }
  return "undecided";
}

}  // namespace anytime
