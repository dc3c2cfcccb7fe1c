#include "anytime/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anytime/eprocess.hpp"
#include "anytime/forecasters.hpp"
#include "anytime/rng.hpp"

namespace anytime {

std::vector<PathStep> simulate_path(const PathSpec& spec, std::uint64_t seed) {
  const auto reality = changepoint_reality(spec.horizon, seed, spec.noise);
  const auto outcomes = sample_outcomes(reality, seed);
  auto fp = make_forecaster(spec.p_name);
  auto fq = make_forecaster(spec.q_name);

  std::vector<PathStep> path(spec.horizon);
  for (std::size_t i = 0; i < spec.horizon; ++i) {
    PathStep& s = path[i];
    s.t = i + 1;
    s.p = fp->predict();
    s.q = fq->predict();
    if (spec.rule.kind == ScoreKind::winkler) {
      // Winkler's normalizer is undefined at the baseline's edges.
      const double q0 = std::min(spec.rule.q0, 1.0 - spec.rule.q0);
      s.q = std::clamp(s.q, std::nextafter(q0, 1.0), std::nextafter(1.0 - q0, 0.0));
    }
    s.r = reality.r[i];
    s.y = outcomes[i];
    s.dhat = pointwise_diff(spec.rule, s.p, s.q, s.y).value;
    s.delta = expected_diff(spec.rule, s.p, s.q, s.r);
    fp->observe(s.y);
    fq->observe(s.y);
  }
  return path;
}

RunSummary evaluate_path(std::span<const PathStep> path, const CsConfig& config,
                         double bound) {
  RunSummary out;
  auto state = ComparisonState::fresh(bound, config.centering);
  double sum_delta = 0.0;
  double hint = -std::numeric_limits<double>::infinity();
  for (const auto& step : path) {
    state = update(state, step.dhat);
    sum_delta += step.delta;
    const double delta_t = sum_delta / static_cast<double>(state.t);

    ConfInterval ci;
    if (config.method == CsMethod::hoeffding) {
      ci = cs_hoeffding(state, config.boundary);
    } else {
      double numerator = 0.0;
      ci = cs_eb(state, config.boundary, hint, &numerator);
      // The boundary is nondecreasing in V_hat, so the previous root (less a
      // margin wider than the bisection tolerance) stays below the next one.
      hint = numerator - 1e-6;
    }
    if (!out.miscovered && !ci.contains(delta_t)) {
      out.miscovered = true;
      out.first_miss = state.t;
    }
    if (out.first_decision == 0 && decide(ci) != Decision::undecided) {
      out.first_decision = state.t;
    }
    out.final_ci = ci;
    out.final_delta = delta_t;
  }
  out.final_delta_hat = state.delta_hat;
  return out;
}

double CoverageResult::miscoverage_rate(std::size_t config) const {
  const auto& runs = summaries.at(config);
  if (runs.empty()) return 0.0;
  const auto misses = std::count_if(runs.begin(), runs.end(),
                                    [](const RunSummary& r) { return r.miscovered; });
  return static_cast<double>(misses) / static_cast<double>(runs.size());
}

double CoverageResult::fraction_final_above_zero(std::size_t config) const {
  const auto& runs = summaries.at(config);
  if (runs.empty()) return 0.0;
  const auto above = std::count_if(runs.begin(), runs.end(), [](const RunSummary& r) {
    return r.final_ci.lower > 0.0;
  });
  return static_cast<double>(above) / static_cast<double>(runs.size());
}

namespace {

double path_bound(const PathSpec& spec) { return spec.rule.diff_bound(); }

void evaluate_run(const PathSpec& spec, std::span<const CsConfig> configs,
                  std::uint64_t seed, std::size_t run, CoverageResult& result) {
  const auto path = simulate_path(spec, seed);
  for (std::size_t k = 0; k < configs.size(); ++k) {
    result.summaries[k][run] = evaluate_path(path, configs[k], path_bound(spec));
  }
}

CoverageResult make_result(std::size_t configs, std::size_t runs) {
  CoverageResult result;
  result.summaries.assign(configs, std::vector<RunSummary>(runs));
  return result;
}

}  // namespace

CoverageResult run_coverage_serial(const PathSpec& spec,
                                   std::span<const CsConfig> configs,
                                   std::size_t runs, std::uint64_t base_seed) {
  auto result = make_result(configs.size(), runs);
  for (std::size_t i = 0; i < runs; ++i) {
    evaluate_run(spec, configs, base_seed + i, i, result);
  }
  return result;
}

CoverageResult run_coverage_parallel(const PathSpec& spec,
                                     std::span<const CsConfig> configs,
                                     std::size_t runs, std::uint64_t base_seed) {
  auto result = make_result(configs.size(), runs);
  const auto n = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto run = static_cast<std::size_t>(i);
    evaluate_run(spec, configs, base_seed + run, run, result);
  }
  return result;
}

NullRunResult run_null_path(const NullSpec& spec, std::uint64_t seed) {
  if (!(spec.offset > 0.0 && spec.offset < 0.5)) {
    throw std::invalid_argument("null offset must lie in (0, 0.5)");
  }
  const rng::CounterRng reality(seed, rng::null_reality);
  const rng::CounterRng outcomes(seed, rng::outcomes);
  const rng::CounterRng stopping(seed, rng::stopping_times);

  const auto horizon = spec.horizon;
  const auto cap = 1 + static_cast<std::size_t>(stopping.uniform(0) *
                                                static_cast<double>(horizon));
  const auto rule = ScoringRule::brier();
  const GammaExponentialMixture mixture(spec.rho, spec.c);
  const double log_stop = std::log(spec.stop_level);
  const double log_reject = -std::log(spec.alpha);

  NullRunResult out;
  auto state = ComparisonState::fresh(rule.diff_bound());
  EvidenceState ev_pq(Direction::pq);
  EvidenceState ev_qp(Direction::qp);
  bool mixture_stopped = false;
  bool fixed_stopped = false;

  for (std::size_t t = 1; t <= horizon; ++t) {
    const double d = spec.offset;
    const double r = d + (1.0 - 2.0 * d) * reality.uniform(t);
    const int y = outcomes.uniform(t) < r ? 1 : 0;
    state = update(state, pointwise_diff(rule, r + d, r - d, y).value);

    const double log_pq = log_e_mixture(state, mixture, Direction::pq);
    ev_pq.observe_log(log_pq);
    ev_qp.observe_log(log_e_mixture(state, mixture, Direction::qp));
    const double log_fixed = log_e_fixed_lambda(state, spec.lambda, spec.c, Direction::pq);

    if (!mixture_stopped && (t == cap || log_pq >= log_stop)) {
      mixture_stopped = true;
      out.tau_mixture = t;
      out.e_tau_mixture = std::exp(log_pq);
    }
    if (!fixed_stopped && (t == cap || log_fixed >= log_stop)) {
      fixed_stopped = true;
      out.tau_fixed = t;
      out.e_tau_fixed = std::exp(log_fixed);
    }
  }
  out.rejected_pq = ev_pq.log_e_running_max() >= log_reject;
  out.rejected_qp = ev_qp.log_e_running_max() >= log_reject;
  return out;
}

std::vector<NullRunResult> run_null_serial(const NullSpec& spec, std::size_t runs,
                                           std::uint64_t base_seed) {
  std::vector<NullRunResult> out(runs);
  for (std::size_t i = 0; i < runs; ++i) out[i] = run_null_path(spec, base_seed + i);
  return out;
}

std::vector<NullRunResult> run_null_parallel(const NullSpec& spec, std::size_t runs,
                                             std::uint64_t base_seed) {
  std::vector<NullRunResult> out(runs);
  const auto n = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto run = static_cast<std::size_t>(i);
    out[run] = run_null_path(spec, base_seed + run);
  }
  return out;
}

}  // namespace anytime
