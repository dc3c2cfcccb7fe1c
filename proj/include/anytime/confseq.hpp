#pragma once

// Running score-differential statistics and the confidence sequences built
// from them. A (1-a)-CS takes a boundary with crossing probability a/2.

#include <cstddef>
#include <string_view>

#include "anytime/boundaries.hpp"

namespace anytime {

/// Predictable centering gamma_i for the intrinsic time.
enum class Centering { mean, zero };

struct ComparisonState {
  std::size_t t = 0;
  double sum_dhat = 0.0;
  double delta_hat = 0.0;
  double vhat = 0.0;
  double gamma_next = 0.0;  // gamma_{t+1}
  double bound = 1.0;       // |dhat_i| <= bound
  Centering centering = Centering::mean;

  static ComparisonState fresh(double bound, Centering centering = Centering::mean);
};

/// Folds one pointwise differential into the state. Throws
/// std::domain_error naming the time index if |dhat| exceeds the bound.
ComparisonState update(const ComparisonState& state, double dhat);

struct ConfInterval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Delta_hat +- u(t b^2)/t for normal mixtures, +- 2b u_S(t)/t for stitched95.
ConfInterval cs_hoeffding(const ComparisonState& state,
                          const UniformBoundary& boundary);

/// Delta_hat +- u(V_hat)/t. Gamma-exponential boundaries need c >= 2b.
/// `lower_hint` is forwarded to the boundary root finder.
ConfInterval cs_eb(const ComparisonState& state, const UniformBoundary& boundary);
ConfInterval cs_eb(const ComparisonState& state, const UniformBoundary& boundary,
                   double lower_hint, double* radius_numerator = nullptr);

/// Intersection of two intervals; collapses to a point if they are disjoint.
ConfInterval intersect(const ConfInterval& a, const ConfInterval& b);

enum class Decision { p_better, q_better, undecided };

Decision decide(const ConfInterval& ci);
std::string_view to_string(Decision d);

}  // namespace anytime
