#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "anytime/forecasters.hpp"
#include "anytime/rng.hpp"

using namespace anytime;
using doctest::Approx;

namespace {

std::vector<int> bernoulli_stream(std::size_t n, double r, std::uint64_t seed) {
  const rng::CounterRng gen(seed, rng::experiment);
  std::vector<int> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = gen.uniform(i) < r ? 1 : 0;
  return ys;
}

std::vector<double> play(Forecaster& f, const std::vector<int>& ys) {
  std::vector<double> out;
  out.reserve(ys.size());
  for (int y : ys) {
    out.push_back(f.predict());
    f.observe(y);
  }
  return out;
}

}  // namespace

TEST_CASE("counter RNG is pinned") {
  CHECK(rng::splitmix64(0) == 0xE220A8397B1DCDAFULL);
  const rng::CounterRng gen(42, rng::outcomes);
  CHECK(gen.bits(0) == 0x844F060AD500A6A0ULL);
  CHECK(gen.bits(1) == 0xE68980446C04C903ULL);
  CHECK(gen.uniform(0) == 0.5168308044858372);
  CHECK(gen.uniform(2) == 0.7103396162780014);
  // pure function of the counter
  CHECK(gen.uniform(12345) == gen.uniform(12345));
  CHECK(rng::CounterRng(42, rng::reality_noise).uniform(0) != gen.uniform(0));
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double z = gen.normal(i);
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / 20000) < 0.05);
  CHECK(std::abs(sum2 / 20000 - 1.0) < 0.05);
}

TEST_CASE("laplace") {
  CHECK(laplace_predict(std::vector<int>{}) == 0.5);
  CHECK(laplace_predict(std::vector<int>{1}) == 0.75);
  CHECK(laplace_predict(std::vector<int>{1, 1, 0}) == 0.625);
  auto f = make_forecaster("laplace");
  const std::vector<int> ys{1, 1, 0, 1};
  const auto p = play(*f, ys);
  CHECK(p == std::vector<double>{0.5, 0.75, 2.5 / 3, 2.5 / 4});
}

TEST_CASE("kernels") {
  const auto poly = Kernel::poly(3);
  const auto rbf = Kernel::rbf(0.1);
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double p = i / 20.0;
      const double q = j / 20.0;
      CHECK(poly(p, q) == poly(q, p));
      CHECK(poly(p, q) == Approx(std::pow(1 + p * q, 3)));
      CHECK(rbf(p, q) == rbf(q, p));
      CHECK(rbf(p, q) > 0.0);
      CHECK(rbf(p, q) <= 1.0);
    }
    CHECK(poly(i / 20.0, i / 20.0) >= 1.0);
    CHECK(rbf(i / 20.0, i / 20.0) == 1.0);
  }
  CHECK_THROWS(Kernel::poly(0));
  CHECK_THROWS(Kernel::rbf(0.0));
}

TEST_CASE("k29 examples") {
  CHECK(k29_predict({}, Kernel::poly(3)) == 0.5);
  const std::vector<HistoryEntry> one{{0.5, 1}};
  CHECK(k29_predict(one, Kernel::poly(3)) == 1.0);
  const std::vector<HistoryEntry> down{{0.5, 0}};
  CHECK(k29_predict(down, Kernel::poly(3)) == 0.0);
  // f(p) = 0.8 (1 + 0.2p)^3 - 0.7 (1 + 0.7p)^3 changes sign on (0,1)
  const std::vector<HistoryEntry> two{{0.2, 1}, {0.7, 0}};
  const double root = k29_predict(two, Kernel::poly(3));
  CHECK(root > 0.0);
  CHECK(root < 1.0);
  CHECK(std::abs(k29_residual(two, Kernel::poly(3), root)) < 1e-4);
}

TEST_CASE("k29 calibration on iid outcomes") {
  for (const char* name : {"k29_poly3", "k29_rbf0.01"}) {
    auto f = make_forecaster(name);
    const auto ys = bernoulli_stream(3000, 0.7, 21);
    const auto p = play(*f, ys);
    const double avg = std::accumulate(p.end() - 500, p.end(), 0.0) / 500.0;
    INFO(name);
    CHECK(avg == Approx(0.7).epsilon(0.05 / 0.7));
  }
}

TEST_CASE("k29 root residual is within the Lipschitz tolerance") {
  for (const auto& kernel : {Kernel::poly(3), Kernel::rbf(0.05)}) {
    std::vector<HistoryEntry> hist;
    const auto ys = bernoulli_stream(600, 0.35, 3);
    double mass = 0.0;
    for (int y : ys) {
      const double p = k29_predict(hist, kernel);
      const double f0 = k29_residual(hist, kernel, 0.0);
      const double f1 = k29_residual(hist, kernel, 1.0);
      if (p > 0.0 && p < 1.0 && !hist.empty()) {
        // f is Lipschitz with constant max_slope * sum |y_i - p_i|
        CHECK(std::abs(k29_residual(hist, kernel, p)) <= kernel.max_slope() * mass * 1e-6 + 1e-12);
      } else if (!hist.empty()) {
        CHECK(((p == 1.0 && f0 > 0.0) || (p == 0.0 && f0 < 0.0) || f0 == 0.0));
        (void)f1;
      }
      hist.push_back({p, y});
      mass += std::abs(y - p);
    }
  }
}

TEST_CASE("K29Forecaster matches the reference solver") {
  K29Forecaster f(Kernel::poly(3), "k29_poly3");
  const auto ys = bernoulli_stream(800, 0.6, 8);
  std::vector<HistoryEntry> hist;
  for (int y : ys) {
    const double p = f.predict();
    CHECK(p == Approx(k29_predict(hist, Kernel::poly(3))).epsilon(2e-6));
    CHECK(f.predict() == p);  // cached until the outcome arrives
    f.observe(y);
    hist.push_back({p, y});
    CHECK(f.residual(0.37) == Approx(k29_residual(hist, Kernel::poly(3), 0.37)).epsilon(1e-10));
  }
  CHECK(f.history().size() == ys.size());
}

TEST_CASE("parallel residual equals the serial reference") {
  const rng::CounterRng gen(5, rng::experiment);
  std::vector<HistoryEntry> hist(20'000);
  for (std::size_t i = 0; i < hist.size(); ++i) {
    hist[i] = {gen.uniform(2 * i), gen.uniform(2 * i + 1) < 0.4 ? 1 : 0};
  }
  for (const auto& kernel : {Kernel::rbf(0.01), Kernel::poly(3)}) {
    for (double p : {0.0, 0.13, 0.5, 0.99}) {
      CHECK(k29_residual_parallel(hist, kernel, p) ==
            Approx(k29_residual(hist, kernel, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("forecaster factory") {
  for (const char* name :
       {"always_0.5", "always_0", "always_1", "laplace", "k29_poly3", "k29_rbf0.01"}) {
    auto f = make_forecaster(name);
    CHECK(f->name() == name);
  }
  CHECK(make_forecaster("always_0.3")->predict() == 0.3);
  CHECK_THROWS_AS(make_forecaster("oracle"), std::invalid_argument);
  CHECK_THROWS_AS(make_forecaster("always_2"), std::invalid_argument);
  CHECK_THROWS_AS(make_forecaster("k29_poly1.5"), std::invalid_argument);
  CHECK_THROWS_AS(make_forecaster("always_x"), std::invalid_argument);
}

TEST_CASE("forecasts stay in [0,1] on many random streams") {
  for (const char* name : {"always_0.5", "laplace", "k29_poly3", "k29_poly5"}) {
    for (std::uint64_t s = 0; s < 25'000; ++s) {
      auto f = make_forecaster(name);
      const rng::CounterRng gen(s, rng::experiment);
      const double r = gen.uniform(0);
      bool ok = true;
      for (int t = 1; t <= 4; ++t) {
        const double p = f->predict();
        ok = ok && p >= 0.0 && p <= 1.0;
        f->observe(gen.uniform(t) < r ? 1 : 0);
      }
      if (!ok) FAIL_CHECK(name, " left [0,1] on stream ", s);
    }
  }
  auto rbf = make_forecaster("k29_rbf0.01");
  for (int y : bernoulli_stream(2000, 0.45, 1)) {
    const double p = rbf->predict();
    CHECK((p >= 0.0 && p <= 1.0));
    rbf->observe(y);
  }
}

TEST_CASE("predictability: future outcomes never change past forecasts") {
  for (const char* name : {"laplace", "k29_poly3", "k29_rbf0.01"}) {
    const auto ys = bernoulli_stream(400, 0.5, 17);
    for (std::size_t cut : {0u, 1u, 57u, 399u}) {
      auto mutated = ys;
      for (std::size_t i = cut; i < mutated.size(); ++i) mutated[i] = 1 - mutated[i];
      auto a = make_forecaster(name);
      auto b = make_forecaster(name);
      const auto pa = play(*a, ys);
      const auto pb = play(*b, mutated);
      for (std::size_t i = 0; i <= cut && i < pa.size(); ++i) CHECK(pa[i] == pb[i]);
    }
  }
}

TEST_CASE("seasonal laplace") {
  CHECK(seasonal_laplace_predict(0, 0, 0.5) == 0.5);
  CHECK(seasonal_laplace_predict(3, 4, 0.5) == Approx(0.7));
  CHECK(next_carryover(0.7) == Approx(2.0 / 3 * 0.7 + 1.0 / 6));
  CHECK_THROWS(seasonal_laplace_predict(5, 4, 0.5));

  SeasonalLaplace team;
  CHECK(team.predict() == 0.5);
  for (int won : {1, 1, 0, 1}) team.observe(won);
  CHECK(team.predict() == Approx(0.7));
  team.end_season();
  // the post-season forecast (k + c)/(n + 1) reverts by a third toward 1/2
  CHECK(team.carryover() == Approx(2.0 / 3 * 0.7 + 1.0 / 6));
  CHECK(team.predict() == Approx(team.carryover()));

  SeasonalLaplace other;
  const auto [a, b] = rescale_pair(team.predict(), other.predict());
  CHECK(a + b == Approx(1.0));
}

TEST_CASE("rescale pair") {
  const auto [a, b] = rescale_pair(0.5833, 0.4545);
  CHECK(std::round(a * 1000) / 1000 == 0.562);
  CHECK(std::round(b * 1000) / 1000 == 0.438);
  CHECK(std::round(a * 100) / 100 == 0.56);
  CHECK(std::round(b * 100) / 100 == 0.44);
  const auto [c, d] = rescale_pair(0.0, 0.0);
  CHECK(c == 0.5);
  CHECK(d == 0.5);
}

TEST_CASE("changepoint reality") {
  CHECK(changepoint_theta(1) == 0.5);
  CHECK(changepoint_theta(100) == 0.5);
  CHECK(changepoint_theta(101) == 0.0);
  CHECK(changepoint_theta(500) == 0.0);
  CHECK(changepoint_theta(501) == 1.0);
  CHECK(changepoint_theta(5000) == 1.0);
  CHECK(changepoint_theta(5001) == 0.0);
  CHECK(changepoint_theta(10000) == 0.0);

  const auto quiet = changepoint_reality(10'000, 3, false);
  CHECK(quiet.r[49] == Approx(0.5));
  CHECK(quiet.r[199] == Approx(0.2));
  CHECK(quiet.r[999] == Approx(0.8));
  CHECK(quiet.r[5999] == Approx(0.2));

  const auto noisy = changepoint_reality(10'000, 3, true);
  CHECK(noisy.seed == 3);
  for (double r : noisy.r) CHECK((r >= 0.0 && r <= 1.0));
  CHECK(changepoint_reality(10'000, 3, true).r == noisy.r);
  CHECK(changepoint_reality(10'000, 4, true).r != noisy.r);
  // the noise has standard deviation 0.1 around the regime mean
  double ss = 0.0;
  for (std::size_t t = 1000; t < 5000; ++t) ss += (noisy.r[t] - 0.8) * (noisy.r[t] - 0.8);
  CHECK(std::sqrt(ss / 4000) == Approx(0.1).epsilon(0.1));
}

TEST_CASE("sample outcomes") {
  RealitySequence zeros{std::vector<double>(500, 0.0), 1};
  for (int y : sample_outcomes(zeros, 1)) CHECK(y == 0);
  RealitySequence ones{std::vector<double>(500, 1.0), 1};
  for (int y : sample_outcomes(ones, 1)) CHECK(y == 1);
  RealitySequence half{std::vector<double>(10'000, 0.5), 9};
  const auto ys = sample_outcomes(half, 9);
  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  CHECK(std::abs(mean - 0.5) <= 0.02);
  CHECK(sample_outcomes(half, 9) == ys);
}
