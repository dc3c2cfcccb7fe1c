#include "anytime/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anytime::special {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10'000'000;

void check_args(double a, double z) {
  if (!(a > 0.0) || !(z >= 0.0) || std::isnan(z)) {
    throw std::domain_error("incomplete gamma requires a > 0 and z >= 0");
  }
}

/// a log z - z - lgamma(a + 1). For large a the Stirling form avoids the
/// cancellation between a log z and lgamma(a + 1).
double log_prefix(double a, double z) {
  if (a < 10.0) return a * std::log(z) - z - std::lgamma(a + 1.0);
  const double d = (z - a) / a;
  const double inv = 1.0 / a;
  const double inv2 = inv * inv;
  const double corr =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 -
                                                                   inv2 / 1188.0))));
  constexpr double half_log_2pi = 0.91893853320467274178;
  const double log_ratio = std::abs(d) < 0.5 ? std::log1p(d) : std::log(z / a);
  return a * (log_ratio - d) - 0.5 * std::log(a) - half_log_2pi - corr;
}

}  // namespace

double lower_gamma_series(double a, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= z / (a + n);
    sum += term;
    if (term < sum * kEps) return sum;
  }
  throw std::runtime_error("lower_gamma_series did not converge");
}

double upper_gamma_fraction(double a, double z) {
  // Q(a,z) = e^{-z} z^a / Gamma(a) * 1/(z+1-a- 1(1-a)/(z+3-a- ...)).
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::exp(log_prefix(a, z) + std::log(a)) * h;
    }
  }
  throw std::runtime_error("upper_gamma_fraction did not converge");
}

double log_gamma_p(double a, double z) {
  check_args(a, z);
  if (z == 0.0) return -std::numeric_limits<double>::infinity();
  if (z < a + 1.0) {
    return log_prefix(a, z) + std::log(lower_gamma_series(a, z));
  }
  return std::log1p(-upper_gamma_fraction(a, z));
}

double gamma_p(double a, double z) {
  check_args(a, z);
  if (z == 0.0) return 0.0;
  if (z < a + 1.0) return std::exp(log_gamma_p(a, z));
  return 1.0 - upper_gamma_fraction(a, z);
}

double gamma_q(double a, double z) {
  check_args(a, z);
  if (z == 0.0) return 1.0;
  if (z < a + 1.0) return -std::expm1(log_gamma_p(a, z));
  return upper_gamma_fraction(a, z);
}

}  // namespace anytime::special
