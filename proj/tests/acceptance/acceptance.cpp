// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "anytime/boundaries.hpp"
#include "anytime/eprocess.hpp"
#include "anytime/io.hpp"
#include "anytime/pipeline.hpp"
#include "anytime/scoring.hpp"
#include "anytime/simulation.hpp"

using namespace anytime;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %-40s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CsConfig cs_config(const std::string& boundary, CsMethod method) {
  RunConfig rc;
  rc.boundary = boundary;
  rc.cs = method;
  const auto r = resolve(rc);
  return {r.method, r.boundary, r.centering};
}

void coverage() {
  constexpr std::size_t kRuns = 500;
  PathSpec spec;
  spec.p_name = "laplace";
  spec.q_name = "k29_poly3";
  spec.horizon = 2000;
  const std::vector<std::pair<std::string, CsConfig>> configs{
      {"coverage_eb_gamma_exponential", cs_config("gamma-exponential", CsMethod::eb)},
      {"coverage_hoeffding_normal_mixture", cs_config("normal-mixture", CsMethod::hoeffding)},
      {"coverage_eb_stitched95", cs_config("stitched95", CsMethod::eb)},
      {"coverage_hoeffding_stitched95", cs_config("stitched95", CsMethod::hoeffding)},
  };
  std::vector<CsConfig> cs;
  for (const auto& c : configs) cs.push_back(c.second);
  const auto result = run_coverage_parallel(spec, cs, kRuns, 1);
  const double limit = 0.05 + 2.0 * std::sqrt(0.05 * 0.95 / kRuns);
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const double rate = result.miscoverage_rate(k);
    report(rate <= limit, configs[k].first,
           fmt("miscoverage %.4f <= %.4f (500 runs, T=2000)", rate, limit));
  }
}

void gamma_exponential_quadrature() {
  double worst = 0.0;
  std::size_t points = 0;
  for (double rho : {0.5, 1.0, 10.0}) {
    for (double c : {0.1, 1.0}) {
      const GammaExponentialMixture mix(rho, c);
      for (int i = 0; i < 20; ++i) {
        const double s = 100.0 * i / 19.0;
        for (int j = 0; j < 20; ++j) {
          // log-spaced intrinsic time over [0.1, 1000]
          const double v = 0.1 * std::pow(1e4, j / 19.0);
          const double got = mix.log_m(s, v);
          const double want = oracle::log_gamma_exponential_m(s, v, rho, c);
          // relative error of m, from the difference of logs
          worst = std::max(worst, std::abs(std::expm1(got - want)));
          ++points;
        }
      }
    }
  }
  report(worst <= 1e-6, "gamma_exponential_m_vs_quadrature",
         fmt("max rel err %.3g over %g points (tol 1e-6)", worst,
             static_cast<double>(points)));
}

void normal_mixture_closed_form() {
  double worst = 0.0;
  for (double v : {0.0, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4}) {
    for (double rho : {0.1, 1.0, 10.0}) {
      for (double alpha : {0.01, 0.025, 0.05, 0.1}) {
        const double u = normal_mixture_bound(v, rho, alpha);
        worst = std::max(worst, std::abs(oracle::mixture_m_normal(u, v, rho) - 1.0 / alpha));
      }
    }
  }
  report(worst <= 1e-8, "normal_mixture_root_by_quadrature",
         fmt("max |m(u,v) - 1/alpha| = %.3g (tol 1e-8)", worst));
}

void stitched_value() {
  const double r = stitched95_radius(1.0);
  report(std::abs(r - 14.9039) <= 1e-3, "stitched95_at_v1",
         fmt("radius(1) = %.6f, expected 14.9039 +- 1e-3", r));
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

void eprocess_validity() {
  constexpr std::size_t kRuns = 2000;
  NullSpec spec;
  const auto runs = run_null_parallel(spec, kRuns, 1);
  std::vector<double> e_mix;
  std::vector<double> e_fixed;
  std::size_t rej_pq = 0;
  std::size_t rej_qp = 0;
  for (const auto& r : runs) {
    e_mix.push_back(r.e_tau_mixture);
    e_fixed.push_back(r.e_tau_fixed);
    rej_pq += r.rejected_pq;
    rej_qp += r.rejected_qp;
  }
  const auto m = mean_se(e_mix);
  report(m.mean <= 1.0 + 3.0 * m.se, "eprocess_mixture_mean_at_stopping_time",
         fmt("mean E_tau %.4f <= 1 + 3*%.4f", m.mean, m.se));
  const auto f = mean_se(e_fixed);
  report(f.mean <= 1.0 + 3.0 * f.se, "eprocess_fixed_lambda_mean_at_stopping_time",
         fmt("mean E_tau %.4f <= 1 + 3*%.4f", f.mean, f.se));
  const double se = std::sqrt(0.05 * 0.95 / kRuns);
  const double frr_pq = static_cast<double>(rej_pq) / kRuns;
  const double frr_qp = static_cast<double>(rej_qp) / kRuns;
  report(frr_pq <= 0.05 + 2.0 * se, "pprocess_false_rejection_pq",
         fmt("rate %.4f <= %.4f", frr_pq, 0.05 + 2.0 * se));
  report(frr_qp <= 0.05 + 2.0 * se, "pprocess_false_rejection_qp",
         fmt("rate %.4f <= %.4f", frr_qp, 0.05 + 2.0 * se));
}

void fan_kernel() {
  const auto cgf = Cgf::exponential(1.0);
  double worst = -1.0;
  for (int i = 0; i < 200; ++i) {
    const double lambda = 0.999 * i / 199.0;
    const double psi_l = psi(cgf, lambda);
    for (int j = 0; j < 200; ++j) {
      const double xi = -1.0 + 11.0 * j / 199.0;
      const double lhs = std::exp(lambda * xi - psi_l * xi * xi);
      worst = std::max(worst, lhs - (1.0 + lambda * xi));
    }
  }
  report(worst <= 1e-12, "fan_inequality_grid",
         fmt("max exp(l x - psi(l) x^2) - (1 + l x) = %.3g", worst));
}

void linear_equivalent_identities() {
  double worst = 0.0;
  const std::vector<ScoringRule> rules{ScoringRule::brier(), ScoringRule::spherical(),
                                       ScoringRule::zero_one()};
  auto spherical = [](double p, double r) {
    return (p * r + (1 - p) * (1 - r)) / std::sqrt(p * p + (1 - p) * (1 - p));
  };
  auto zero_one = [](double p, double r) { return p >= 0.5 ? r : 1.0 - r; };
  for (int ip = 0; ip <= 10; ++ip) {
    for (int iq = 0; iq <= 10; ++iq) {
      for (int ir = 0; ir <= 10; ++ir) {
        const double p = ip / 10.0;
        const double q = iq / 10.0;
        const double r = ir / 10.0;
        for (const auto& rule : rules) {
          const double mean = r * pointwise_diff(rule, p, q, 1).value +
                              (1 - r) * pointwise_diff(rule, p, q, 0).value;
          double want = 0.0;
          if (rule.kind == ScoreKind::brier) want = (q - r) * (q - r) - (p - r) * (p - r);
          if (rule.kind == ScoreKind::spherical) want = spherical(p, r) - spherical(q, r);
          if (rule.kind == ScoreKind::zero_one) want = zero_one(p, r) - zero_one(q, r);
          worst = std::max(worst, std::abs(mean - want));
        }
        if (iq >= 2 && iq <= 8) {  // q strictly inside (q0, 1 - q0), q0 = 0.1
          const auto w = ScoringRule::winkler(0.1);
          const double mean =
              r * winkler_score(w, p, q, 1) + (1 - r) * winkler_score(w, p, q, 0);
          double want = 0.0;
          if (ip != iq) {
            const double t = p >= q ? (1 - q) * (1 - q) - (1 - p) * (1 - p) : q * q - p * p;
            want = ((q - r) * (q - r) - (p - r) * (p - r)) / t;
          }
          worst = std::max(worst, std::abs(mean - want));
          worst = std::max(worst, std::abs(mean - winkler_at_mean(w, p, q, r)));
        }
      }
    }
  }
  report(worst <= 1e-12, "expected_differential_identities",
         fmt("max deviation %.3g on the 0.1 grid (tol 1e-12)", worst));
}

void figure4() {
  constexpr std::size_t kRuns = 50;
  PathSpec spec;
  spec.p_name = "k29_poly3";
  spec.q_name = "laplace";
  spec.horizon = 10'000;
  const std::vector<CsConfig> cs{cs_config("gamma-exponential", CsMethod::eb)};
  const auto result = run_coverage_parallel(spec, cs, kRuns, 1);
  const double frac = result.fraction_final_above_zero(0);
  report(frac >= 0.6, "k29_poly3_beats_laplace",
         fmt("EB CS lower bound > 0 at T=10^4 in %.2f of 50 runs (need >= 0.60)", frac));
}

void table1_fixture() {
  std::ifstream in(ANYTIME_FIXTURE_DIR "/ws2019.csv");
  const auto records = read_binary_csv(in);
  const auto result = run_compare(RunConfig{}, records);
  // spreadsheet-style oracle straight from the printed percentages
  const double p[] = {.379, .41, .527, .587, .373, .405, .485};
  const double q[] = {.349, .377, .41, .507, .337, .374, .431};
  const int y[] = {1, 1, 0, 0, 0, 1, 1};
  double sum = 0.0;
  for (int i = 0; i < 7; ++i) sum += (q[i] - y[i]) * (q[i] - y[i]) - (p[i] - y[i]) * (p[i] - y[i]);
  const double got = result.rows.back().delta_hat;
  const bool ok = result.rows.size() == 7 && std::abs(got - (-0.006876)) <= 1e-6 &&
                  std::abs(got - sum / 7.0) <= 1e-12;
  report(ok, "table1_fixture_delta_hat",
         fmt("delta_hat_7 = %.9f (oracle %.9f, target -0.006876 +- 1e-6)", got, sum / 7.0));
}

template <typename F>
void timed(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(false, "exception", e.what());
  }
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  timed(stitched_value);
  timed(fan_kernel);
  timed(linear_equivalent_identities);
  timed(normal_mixture_closed_form);
  timed(gamma_exponential_quadrature);
  timed(table1_fixture);
  timed(eprocess_validity);
  timed(coverage);
  timed(figure4);
  std::printf("N/A   %-40s %s\n", "mlb_table3",
              "needs the external 25,165-game dataset; covered by the fixture and "
              "simulation checks above");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d failure(s), %.1f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
