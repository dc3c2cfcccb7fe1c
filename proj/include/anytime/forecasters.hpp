#pragma once

// Reference forecasters and the synthetic changepoint reality. The reality
// simulator knows r_t, so it can also report the true differentials used as
// test oracles.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anytime {

struct Kernel {
  enum class Kind { poly, rbf };
  Kind kind = Kind::poly;
  int degree = 3;
  double sigma = 0.01;

  static Kernel poly(int degree);
  static Kernel rbf(double sigma);

  double operator()(double p, double q) const;
  /// sup over [0,1]^2 of |dK/dp|.
  double max_slope() const;
};

struct HistoryEntry {
  double forecast = 0.5;
  int outcome = 0;
};

/// (k + 0.5) / (t + 1).
double laplace_predict(std::span<const int> history);

/// f(p) = sum_i K(p, p_i) (y_i - p_i). Serial reference.
double k29_residual(std::span<const HistoryEntry> history, const Kernel& kernel,
                    double p);

/// Same sum split across OpenMP threads once the history is long.
double k29_residual_parallel(std::span<const HistoryEntry> history,
                             const Kernel& kernel, double p);

/// Root of f on [0,1]: first sign change on a 65-point grid, refined by
/// bisection to 1e-6. 1 if f > 0 throughout, 0 if f < 0 throughout, 0.5 for
/// an empty history.
double k29_predict(std::span<const HistoryEntry> history, const Kernel& kernel);

/// Root-selection rule shared by every K29 implementation.
template <typename F>
double k29_solve(F&& f) {
  constexpr int kGrid = 64;
  double x_prev = 0.0;
  double f_prev = f(0.0);
  if (f_prev == 0.0) return 0.0;
  bool all_positive = f_prev > 0.0;
  for (int k = 1; k <= kGrid; ++k) {
    const double x = static_cast<double>(k) / kGrid;
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) != (f_prev > 0.0)) {
      double lo = x_prev;
      double hi = x;
      const bool lo_positive = f_prev > 0.0;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    x_prev = x;
    f_prev = fx;
  }
  return all_positive ? 1.0 : 0.0;
}

/// A sequential forecaster: predict() for the coming round, then observe().
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::string name() const = 0;
  virtual double predict() = 0;
  virtual void observe(int y) = 0;
};

/// Names: always_<v> (e.g. always_0.5), laplace, k29_poly<d>, k29_rbf<sigma>.
std::unique_ptr<Forecaster> make_forecaster(std::string_view name);

/// K29 with a polynomial kernel evaluated through running moment sums, O(d)
/// per residual evaluation. Other kernels keep the full history.
class K29Forecaster final : public Forecaster {
 public:
  K29Forecaster(Kernel kernel, std::string name);
  std::string name() const override { return name_; }
  double predict() override;
  void observe(int y) override;
  double residual(double p) const;
  std::span<const HistoryEntry> history() const { return history_; }

 private:
  Kernel kernel_;
  std::string name_;
  std::vector<double> moments_;  // sum_i p_i^j (y_i - p_i), j = 0..d
  std::vector<double> binomial_;
  std::vector<HistoryEntry> history_;
  double pending_ = 0.5;
  bool has_pending_ = false;
};

/// (k + c) / (n + 1) for k wins in n games with carryover c.
double seasonal_laplace_predict(int wins, int games, double carryover);

/// Carryover for the next season: (2/3) p_final + (1/3)(1/2).
double next_carryover(double p_final);

/// Per-team seasonal Laplace state.
class SeasonalLaplace {
 public:
  double predict() const { return seasonal_laplace_predict(wins_, games_, carryover_); }
  void observe(int won);
  /// Reverts the final forecast toward 1/2 by one third and clears the record.
  void end_season();
  double carryover() const { return carryover_; }

 private:
  int wins_ = 0;
  int games_ = 0;
  double carryover_ = 0.5;
};

/// (a, b) -> (a/(a+b), b/(a+b)); (0, 0) -> (0.5, 0.5).
std::pair<double, double> rescale_pair(double a, double b);

struct RealitySequence {
  std::vector<double> r;  // r[t-1] = r_t
  std::uint64_t seed = 0;
};

/// theta_t of the changepoint game (1-based t).
double changepoint_theta(std::size_t t);

/// r_t = 0.8 theta_t + 0.2 (1 - theta_t) + eps_t, eps_t ~ N(0, 0.1^2),
/// clamped to [0,1].
RealitySequence changepoint_reality(std::size_t T, std::uint64_t seed,
                                    bool noise = true);

/// y_t ~ Bern(r_t), independent given r, deterministic in seed.
std::vector<int> sample_outcomes(const RealitySequence& reality, std::uint64_t seed);

}  // namespace anytime
