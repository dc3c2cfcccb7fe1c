#pragma once

// Cumulant generating functions and time-uniform boundaries u(v) such that
// P(exists t: S_t >= u(V_t)) <= alpha for sub-psi processes (S_t, V_t).

#include <cmath>
#include <limits>

namespace anytime {

enum class CgfKind { normal, exponential, gamma };

struct Cgf {
  CgfKind kind = CgfKind::normal;
  double c = 1.0;

  static Cgf normal() { return {CgfKind::normal, 0.0}; }
  static Cgf exponential(double c);
  static Cgf gamma(double c);

  double lambda_max() const;
};

/// psi(lambda) for 0 <= lambda < lambda_max.
double psi(const Cgf& cgf, double lambda);

/// The printed 95% polynomial-stitching radius, before scaling:
/// 1.7 sqrt(v' (loglog(2v') + 3.8)) + 3.4 loglog(2v') + 13 with v' = max(v, 1).
double stitched95_radius(double vhat);

/// Two-sided Gaussian mixture of exp(lambda s - lambda^2 v / 2) with
/// lambda ~ N(0, 1/rho): sqrt(rho/(v+rho)) exp(s^2 / (2(v+rho))).
double mixture_m_normal(double s, double v, double rho);
double log_mixture_m_normal(double s, double v, double rho);

/// sqrt((v+rho) log((v+rho)/(alpha^2 rho))), the root of m_normal = 1/alpha.
double normal_mixture_bound(double v, double rho, double alpha);

/// Gamma-exponential conjugate mixture m(s, v) for psi_{E,c}, normalized so
/// m(0, 0) = 1. For z = (cs+v+rho)/c^2 <= 0 the closed-form upper bound
/// C e^{-rho/c^2} / ((v+rho)/c^2) is returned instead.
double gamma_exponential_m(double s, double v, double rho, double c);
double log_gamma_exponential_m(double s, double v, double rho, double c);

/// sup{s : m(s, v) < 1/alpha}, by bracketing and bisection to 1e-9 in s.
double gamma_exponential_bound(double v, double rho, double c, double alpha);

/// Gamma-exponential mixture with its normalizing constant precomputed.
class GammaExponentialMixture {
 public:
  GammaExponentialMixture(double rho, double c);

  double rho() const { return rho_; }
  double c() const { return c_; }
  double log_m(double s, double v) const;
  double m(double s, double v) const { return std::exp(log_m(s, v)); }

  /// Boundary at crossing probability alpha. `lower_hint`, if finite, must
  /// be a point known to satisfy m(lower_hint, v) < 1/alpha.
  double bound(double v, double alpha,
               double lower_hint = -std::numeric_limits<double>::infinity()) const;

 private:
  double rho_;
  double c_;
  double rho_scaled_;  // rho / c^2
  double log_norm_;    // log C(rho/c^2)
};

/// Mixture precision rho that minimizes u(v_opt; rho) for the normal
/// (Gaussian CGF) or gamma-exponential (exponential CGF) mixture, by
/// golden-section search over log rho in [1e-6 v_opt, 1e6 v_opt].
double rho_for_vopt(double v_opt, const Cgf& cgf, double alpha);

enum class BoundaryKind { stitched95, normal_mixture, gamma_exponential_mixture };

/// A one-sided uniform boundary with crossing probability `alpha`.
///
/// A two-sided (1 - a) confidence sequence uses a boundary with alpha = a/2
/// on each side. `stitched95` is fixed at alpha = 0.025 and is returned in
/// the unscaled units of the printed formula.
class UniformBoundary {
 public:
  static UniformBoundary stitched95();
  static UniformBoundary normal_mixture(double rho, double alpha);
  static UniformBoundary gamma_exponential(double rho, double c, double alpha);

  BoundaryKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double rho() const { return rho_; }
  double c() const { return c_; }

  /// Valid for the Hoeffding (sub-Gaussian) construction.
  bool sub_gaussian() const { return kind_ != BoundaryKind::gamma_exponential_mixture; }
  /// Valid for the empirical-Bernstein (sub-exponential) construction.
  bool sub_exponential() const { return kind_ != BoundaryKind::normal_mixture; }

  double operator()(double v) const;
  double operator()(double v, double lower_hint) const;

 private:
  UniformBoundary(BoundaryKind kind, double alpha, double rho, double c);

  BoundaryKind kind_;
  double alpha_;
  double rho_;
  double c_;
  GammaExponentialMixture mixture_;
};

}  // namespace anytime
