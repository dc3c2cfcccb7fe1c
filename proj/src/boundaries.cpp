#include "anytime/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "anytime/special.hpp"

namespace anytime {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

}  // namespace

Cgf Cgf::exponential(double c) {
  require_positive(c, "exponential CGF scale");
  return {CgfKind::exponential, c};
}

Cgf Cgf::gamma(double c) {
  require_positive(c, "gamma CGF scale");
  return {CgfKind::gamma, c};
}

double Cgf::lambda_max() const {
  if (kind == CgfKind::normal) return std::numeric_limits<double>::infinity();
  return 1.0 / c;
}

double psi(const Cgf& cgf, double lambda) {
  if (!(lambda >= 0.0 && lambda < cgf.lambda_max())) {
    throw std::domain_error("psi: lambda outside [0, lambda_max)");
  }
  switch (cgf.kind) {
    case CgfKind::normal:
      return 0.5 * lambda * lambda;
    case CgfKind::exponential: {
      const double cl = cgf.c * lambda;
      return (-std::log1p(-cl) - cl) / (cgf.c * cgf.c);
    }
    case CgfKind::gamma:
      return lambda * lambda / (2.0 * (1.0 - cgf.c * lambda));
  }
  return 0.0;
}

double stitched95_radius(double vhat) {
  require_nonnegative(vhat, "intrinsic time");
  const double v = std::max(vhat, 1.0);
  const double ll = std::log(std::log(2.0 * v));
  return 1.7 * std::sqrt(v * (ll + 3.8)) + 3.4 * ll + 13.0;
}

double log_mixture_m_normal(double s, double v, double rho) {
  require_nonnegative(v, "intrinsic time");
  require_positive(rho, "rho");
  return 0.5 * std::log(rho / (v + rho)) + s * s / (2.0 * (v + rho));
}

double mixture_m_normal(double s, double v, double rho) {
  return std::exp(log_mixture_m_normal(s, v, rho));
}

double normal_mixture_bound(double v, double rho, double alpha) {
  require_nonnegative(v, "intrinsic time");
  require_positive(rho, "rho");
  require_alpha(alpha);
  return std::sqrt((v + rho) * std::log((v + rho) / (alpha * alpha * rho)));
}

GammaExponentialMixture::GammaExponentialMixture(double rho, double c)
    : rho_(rho), c_(c) {
  require_positive(rho, "rho");
  require_positive(c, "c");
  rho_scaled_ = rho / (c * c);
  // log C(r) = r log r - lgamma(r) - log P(r, r); expanding P by its series
  // leaves r + log r - log(series(r, r)).
  log_norm_ = rho_scaled_ + std::log(rho_scaled_) -
              std::log(special::lower_gamma_series(rho_scaled_, rho_scaled_));
}

double GammaExponentialMixture::log_m(double s, double v) const {
  require_nonnegative(v, "intrinsic time");
  const double a = v / (c_ * c_) + rho_scaled_;
  const double z = s / c_ + a;
  // Throughout, exp((cs+v)/c^2) = exp(z - rho/c^2).
  if (z <= 0.0) return log_norm_ - rho_scaled_ - std::log(a);
  if (z < a + 1.0) {
    return log_norm_ - rho_scaled_ - std::log(a) +
           std::log(special::lower_gamma_series(a, z));
  }
  const double q = special::upper_gamma_fraction(a, z);
  return log_norm_ + std::lgamma(a) + std::log1p(-q) - a * std::log(z) + z -
         rho_scaled_;
}

double GammaExponentialMixture::bound(double v, double alpha,
                                      double lower_hint) const {
  require_nonnegative(v, "intrinsic time");
  require_alpha(alpha);
  const double target = -std::log(alpha);
  // m <= 1 < 1/alpha wherever z <= 0.
  double lo = -(v + rho_) / c_;
  double step = std::max(1.0, std::sqrt(v + rho_));
  if (lower_hint > lo && log_m(lower_hint, v) < target) {
    lo = lower_hint;
    // A warm start is usually within a hair of the root.
    step = 1e-4 * std::max(1.0, std::abs(lo));
  }
  double hi = lo + step;
  while (log_m(hi, v) < target) {
    step *= 2.0;
    hi = lo + step;
    if (hi > 1e9) {
      throw std::runtime_error(
          "gamma_exponential_bound: no crossing of 1/alpha below s = 1e9");
    }
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (log_m(mid, v) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double log_gamma_exponential_m(double s, double v, double rho, double c) {
  return GammaExponentialMixture(rho, c).log_m(s, v);
}

double gamma_exponential_m(double s, double v, double rho, double c) {
  return std::exp(log_gamma_exponential_m(s, v, rho, c));
}

double gamma_exponential_bound(double v, double rho, double c, double alpha) {
  return GammaExponentialMixture(rho, c).bound(v, alpha);
}

namespace {

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double rho_for_vopt(double v_opt, const Cgf& cgf, double alpha) {
  require_positive(v_opt, "v_opt");
  require_alpha(alpha);
  std::function<double(double)> width;
  switch (cgf.kind) {
    case CgfKind::normal:
      width = [&](double log_rho) {
        return normal_mixture_bound(v_opt, std::exp(log_rho), alpha);
      };
      break;
    case CgfKind::exponential:
      width = [&](double log_rho) {
        return gamma_exponential_bound(v_opt, std::exp(log_rho), cgf.c, alpha);
      };
      break;
    case CgfKind::gamma:
      throw std::invalid_argument(
          "rho_for_vopt: no conjugate mixture implemented for the gamma CGF");
  }
  const double lv = std::log(v_opt);
  const double lo = lv + std::log(1e-6);
  const double hi = lv + std::log(1e6);
  // A width of 1e-6 in log rho is a relative tolerance of 1e-6 in rho.
  return std::exp(golden_section_min(width, lo, hi, 1e-6));
}

UniformBoundary::UniformBoundary(BoundaryKind kind, double alpha, double rho,
                                 double c)
    : kind_(kind), alpha_(alpha), rho_(rho), c_(c), mixture_(rho, c) {
  require_alpha(alpha);
}

UniformBoundary UniformBoundary::stitched95() {
  return {BoundaryKind::stitched95, 0.025, 1.0, 1.0};
}

UniformBoundary UniformBoundary::normal_mixture(double rho, double alpha) {
  require_positive(rho, "rho");
  return {BoundaryKind::normal_mixture, alpha, rho, 1.0};
}

UniformBoundary UniformBoundary::gamma_exponential(double rho, double c,
                                                   double alpha) {
  return {BoundaryKind::gamma_exponential_mixture, alpha, rho, c};
}

double UniformBoundary::operator()(double v) const {
  return (*this)(v, -std::numeric_limits<double>::infinity());
}

double UniformBoundary::operator()(double v, double lower_hint) const {
  switch (kind_) {
    case BoundaryKind::stitched95:
      return stitched95_radius(v);
    case BoundaryKind::normal_mixture:
      return normal_mixture_bound(v, rho_, alpha_);
    case BoundaryKind::gamma_exponential_mixture:
      return mixture_.bound(v, alpha_, lower_hint);
  }
  return 0.0;
}

}  // namespace anytime
