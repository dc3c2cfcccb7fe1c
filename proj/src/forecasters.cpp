#include "anytime/forecasters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "anytime/rng.hpp"

namespace anytime {

Kernel Kernel::poly(int degree) {
  if (degree < 1) throw std::invalid_argument("polynomial kernel degree must be >= 1");
  Kernel k;
  k.kind = Kind::poly;
  k.degree = degree;
  return k;
}

Kernel Kernel::rbf(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("RBF kernel width must be positive");
  Kernel k;
  k.kind = Kind::rbf;
  k.sigma = sigma;
  return k;
}

double Kernel::operator()(double p, double q) const {
  if (kind == Kind::poly) return std::pow(1.0 + p * q, degree);
  const double d = p - q;
  return std::exp(-d * d / (2.0 * sigma * sigma));
}

double Kernel::max_slope() const {
  if (kind == Kind::poly) return degree * std::pow(2.0, degree - 1);
  return std::exp(-0.5) / sigma;
}

double laplace_predict(std::span<const int> history) {
  const auto ones = std::count(history.begin(), history.end(), 1);
  return (static_cast<double>(ones) + 0.5) /
         (static_cast<double>(history.size()) + 1.0);
}

double k29_residual(std::span<const HistoryEntry> history, const Kernel& kernel,
                    double p) {
  double f = 0.0;
  for (const auto& h : history) f += kernel(p, h.forecast) * (h.outcome - h.forecast);
  return f;
}

double k29_residual_parallel(std::span<const HistoryEntry> history,
                             const Kernel& kernel, double p) {
  const auto n = static_cast<std::ptrdiff_t>(history.size());
  double f = 0.0;
#pragma omp parallel for reduction(+ : f) schedule(static) if (n > 8192)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& h = history[static_cast<std::size_t>(i)];
    f += kernel(p, h.forecast) * (h.outcome - h.forecast);
  }
  return f;
}

double k29_predict(std::span<const HistoryEntry> history, const Kernel& kernel) {
  if (history.empty()) return 0.5;
  return k29_solve([&](double p) { return k29_residual(history, kernel, p); });
}

namespace {

class ConstantForecaster final : public Forecaster {
 public:
  ConstantForecaster(double value, std::string name)
      : value_(value), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  double predict() override { return value_; }
  void observe(int) override {}

 private:
  double value_;
  std::string name_;
};

class LaplaceForecaster final : public Forecaster {
 public:
  std::string name() const override { return "laplace"; }
  double predict() override {
    return (static_cast<double>(ones_) + 0.5) / (static_cast<double>(count_) + 1.0);
  }
  void observe(int y) override {
    ones_ += y;
    ++count_;
  }

 private:
  std::size_t ones_ = 0;
  std::size_t count_ = 0;
};

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("unknown forecaster '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

K29Forecaster::K29Forecaster(Kernel kernel, std::string name)
    : kernel_(kernel), name_(std::move(name)) {
  if (kernel_.kind == Kernel::Kind::poly) {
    const int d = kernel_.degree;
    moments_.assign(static_cast<std::size_t>(d) + 1, 0.0);
    binomial_.assign(static_cast<std::size_t>(d) + 1, 1.0);
    for (int j = 1; j <= d; ++j) {
      binomial_[static_cast<std::size_t>(j)] =
          binomial_[static_cast<std::size_t>(j) - 1] * (d - j + 1) / j;
    }
  }
}

double K29Forecaster::residual(double p) const {
  if (kernel_.kind != Kernel::Kind::poly) {
    return k29_residual_parallel(history_, kernel_, p);
  }
  // (1 + p q)^d = sum_j C(d,j) p^j q^j, so f(p) = sum_j C(d,j) p^j M_j.
  double f = 0.0;
  double pj = 1.0;
  for (std::size_t j = 0; j < moments_.size(); ++j) {
    f += binomial_[j] * pj * moments_[j];
    pj *= p;
  }
  return f;
}

double K29Forecaster::predict() {
  if (!has_pending_) {
    pending_ = history_.empty() ? 0.5
                                : k29_solve([this](double p) { return residual(p); });
    has_pending_ = true;
  }
  return pending_;
}

void K29Forecaster::observe(int y) {
  const double p = predict();
  const double r = y - p;
  double pj = 1.0;
  for (double& m : moments_) {
    m += pj * r;
    pj *= p;
  }
  history_.push_back({p, y});
  has_pending_ = false;
}

std::unique_ptr<Forecaster> make_forecaster(std::string_view name) {
  if (name == "laplace") return std::make_unique<LaplaceForecaster>();
  if (name.starts_with("always_")) {
    const double v = parse_number(name.substr(7), name);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("constant forecast must lie in [0,1]");
    }
    return std::make_unique<ConstantForecaster>(v, std::string(name));
  }
  if (name.starts_with("k29_poly")) {
    const double d = parse_number(name.substr(8), name);
    if (d != std::floor(d) || d < 1) {
      throw std::invalid_argument("unknown forecaster '" + std::string(name) + "'");
    }
    return std::make_unique<K29Forecaster>(Kernel::poly(static_cast<int>(d)),
                                           std::string(name));
  }
  if (name.starts_with("k29_rbf")) {
    const double sigma = parse_number(name.substr(7), name);
    return std::make_unique<K29Forecaster>(Kernel::rbf(sigma), std::string(name));
  }
  throw std::invalid_argument("unknown forecaster '" + std::string(name) + "'");
}

double seasonal_laplace_predict(int wins, int games, double carryover) {
  if (!(carryover >= 0.0 && carryover <= 1.0)) {
    throw std::domain_error("carryover must lie in [0,1]");
  }
  if (wins < 0 || games < 0 || wins > games) {
    throw std::domain_error("invalid season record");
  }
  return (wins + carryover) / (games + 1.0);
}

double next_carryover(double p_final) {
  return (2.0 / 3.0) * p_final + (1.0 / 3.0) * 0.5;
}

void SeasonalLaplace::observe(int won) {
  if (won != 0 && won != 1) throw std::domain_error("game outcome must be 0 or 1");
  wins_ += won;
  ++games_;
}

void SeasonalLaplace::end_season() {
  carryover_ = next_carryover(predict());
  wins_ = 0;
  games_ = 0;
}

std::pair<double, double> rescale_pair(double a, double b) {
  if (!(a >= 0.0 && b >= 0.0)) throw std::domain_error("rescale_pair: negative input");
  const double total = a + b;
  if (total == 0.0) return {0.5, 0.5};
  return {a / total, b / total};
}

double changepoint_theta(std::size_t t) {
  if (t <= 100) return 0.5;
  if (t <= 500) return 0.0;
  if (t <= 5000) return 1.0;
  return 0.0;
}

RealitySequence changepoint_reality(std::size_t T, std::uint64_t seed, bool noise) {
  if (T < 1) throw std::invalid_argument("changepoint reality needs T >= 1");
  const rng::CounterRng gen(seed, rng::reality_noise);
  RealitySequence seq;
  seq.seed = seed;
  seq.r.resize(T);
  for (std::size_t t = 1; t <= T; ++t) {
    const double theta = changepoint_theta(t);
    double r = 0.8 * theta + 0.2 * (1.0 - theta);
    if (noise) r += 0.1 * gen.normal(t);
    seq.r[t - 1] = std::clamp(r, 0.0, 1.0);
  }
  return seq;
}

std::vector<int> sample_outcomes(const RealitySequence& reality, std::uint64_t seed) {
  const rng::CounterRng gen(seed, rng::outcomes);
  std::vector<int> y(reality.r.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = gen.uniform(i + 1) < reality.r[i] ? 1 : 0;
  }
  return y;
}

}  // namespace anytime
