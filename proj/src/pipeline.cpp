#include "anytime/pipeline.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace anytime {

namespace {

constexpr double kDefaultVopt = 10.0;

bool known_boundary(const std::string& name) {
  return name == "gamma-exponential" || name == "normal-mixture" || name == "stitched95";
}

CsMethod default_method(const std::string& boundary) {
  return boundary == "normal-mixture" ? CsMethod::hoeffding : CsMethod::eb;
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
  if (rho && v_opt) throw UsageError("give at most one of --rho and --v-opt");
  if (rho && !(*rho > 0.0)) throw UsageError("--rho must be positive");
  if (v_opt && !(*v_opt > 0.0)) throw UsageError("--v-opt must be positive");
  if (c && !(*c > 0.0)) throw UsageError("--c must be positive");
  if (!known_boundary(boundary)) {
    throw UsageError("unknown boundary '" + boundary +
                     "' (gamma-exponential, normal-mixture, stitched95)");
  }
  const CsMethod method = cs.value_or(default_method(boundary));
  if (method == CsMethod::hoeffding && boundary == "gamma-exponential") {
    throw UsageError("the Hoeffding CS needs a sub-Gaussian boundary "
                     "(normal-mixture or stitched95)");
  }
  if (method == CsMethod::eb && boundary == "normal-mixture") {
    throw UsageError("the empirical-Bernstein CS needs a sub-exponential boundary "
                     "(gamma-exponential or stitched95)");
  }
  if (boundary == "stitched95" && std::abs(alpha - 0.05) > 1e-12) {
    throw UsageError("stitched95 is only available at --alpha 0.05");
  }
  if (winkler_q0) {
    if (!(*winkler_q0 > 0.0 && *winkler_q0 < 0.5)) {
      throw UsageError("--winkler-q0 must lie in (0, 0.5)");
    }
    if (score != "brier") throw UsageError("the Winkler score uses the Brier base only");
    if (schema == InputSchema::kstep || schema == InputSchema::categorical) {
      throw UsageError("the Winkler score applies to binary forecasts only");
    }
  }
  if (schema == InputSchema::kstep && kstep_weights.empty()) {
    throw UsageError("the k-step schema needs --weights");
  }
  if (lambda && !(*lambda >= 0.0)) throw UsageError("--lambda must be nonnegative");
  if (horizon < 1) throw UsageError("--horizon must be >= 1");
  try {
    (void)scoring_rule_for(*this);
    if (!kstep_weights.empty()) (void)KStepWeights(kstep_weights);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ScoringRule scoring_rule_for(const RunConfig& config) {
  if (config.winkler_q0) return ScoringRule::winkler(*config.winkler_q0);
  return parse_scoring_rule(config.score, config.epsilon);
}

double differential_bound(const RunConfig& config) {
  const auto rule = scoring_rule_for(config);
  if (config.schema == InputSchema::categorical) return categorical_diff_bound(rule);
  return rule.diff_bound();
}

ResolvedConfig resolve(const RunConfig& config) {
  config.validate();
  ResolvedConfig r;
  r.rule = scoring_rule_for(config);
  r.bound = differential_bound(config);
  r.method = config.cs.value_or(default_method(config.boundary));
  r.centering = config.gamma_mode;
  r.intersect = config.intersect;

  const double c = config.c.value_or(2.0 * r.bound);
  if (!(c >= 2.0 * r.bound * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg << "--c must be at least twice the differential bound (" << 2.0 * r.bound << ")";
    throw UsageError(msg.str());
  }
  const double side_alpha = config.alpha / 2.0;
  const double v_opt = config.v_opt.value_or(kDefaultVopt);
  auto exp_rho = [&] {
    return config.rho ? *config.rho : rho_for_vopt(v_opt, Cgf::exponential(c), side_alpha);
  };

  if (config.boundary == "gamma-exponential") {
    const double rho = exp_rho();
    r.boundary = UniformBoundary::gamma_exponential(rho, c, side_alpha);
    r.evidence = GammaExponentialMixture(rho, c);
  } else if (config.boundary == "normal-mixture") {
    const double rho =
        config.rho ? *config.rho : rho_for_vopt(v_opt, Cgf::normal(), side_alpha);
    r.boundary = UniformBoundary::normal_mixture(rho, side_alpha);
    r.evidence = GammaExponentialMixture(
        rho_for_vopt(v_opt, Cgf::exponential(c), side_alpha), c);
  } else {
    r.boundary = UniformBoundary::stitched95();
    r.evidence = GammaExponentialMixture(exp_rho(), c);
  }

  if (config.lambda) {
    if (!(*config.lambda < 1.0 / c)) {
      std::ostringstream msg;
      msg << "--lambda must be below 1/c = " << 1.0 / c;
      throw UsageError(msg.str());
    }
    r.lambda = config.lambda;
  }
  return r;
}

StreamComparator::StreamComparator(ResolvedConfig config)
    : cfg_(std::move(config)), state_(ComparisonState::fresh(cfg_.bound, cfg_.centering)) {}

OutputRow StreamComparator::push(double dhat) {
  state_ = update(state_, dhat);

  ConfInterval ci;
  if (cfg_.method == CsMethod::hoeffding) {
    ci = cs_hoeffding(state_, cfg_.boundary);
  } else {
    double numerator = 0.0;
    ci = cs_eb(state_, cfg_.boundary, hint_, &numerator);
    hint_ = numerator - 1e-6;
  }
  if (cfg_.intersect) {
    running_ = running_ ? intersect(*running_, ci) : ci;
    ci = *running_;
  }

  double log_pq = 0.0;
  double log_qp = 0.0;
  if (cfg_.lambda) {
    const double c = cfg_.evidence.c();
    log_pq = log_e_fixed_lambda(state_, *cfg_.lambda, c, Direction::pq);
    log_qp = log_e_fixed_lambda(state_, *cfg_.lambda, c, Direction::qp);
  } else {
    log_pq = log_e_mixture(state_, cfg_.evidence, Direction::pq);
    log_qp = log_e_mixture(state_, cfg_.evidence, Direction::qp);
  }
  ev_pq_.observe_log(log_pq);
  ev_qp_.observe_log(log_qp);

  OutputRow row;
  row.t = state_.t;
  row.delta_hat = state_.delta_hat;
  row.vhat = state_.vhat;
  row.lcb = ci.lower;
  row.ucb = ci.upper;
  row.width = ci.width();
  row.e_pq = std::exp(log_pq);
  row.e_qp = std::exp(log_qp);
  row.p_pq = p_process(ev_pq_);
  row.p_qp = p_process(ev_qp_);
  row.decision = decide(ci);
  return row;
}

std::string summary_line(const CompareSummary& summary) {
  std::ostringstream out;
  out << "summary: t=" << summary.t << " decision=" << to_string(summary.final_decision)
      << " first_decision_t=";
  if (summary.first_decision_t) {
    out << *summary.first_decision_t;
  } else {
    out << "none";
  }
  return out.str();
}

std::vector<double> differentials(const RunConfig& config,
                                  std::span<const ForecastRecord> records) {
  const auto rule = scoring_rule_for(config);
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    try {
      out.push_back(pointwise_diff(rule, rec.p, rec.q, rec.y).value);
    } catch (const std::domain_error& e) {
      throw DataError("row t=" + std::to_string(rec.t) + ": " + e.what());
    }
  }
  return out;
}

std::vector<double> differentials(const RunConfig& config,
                                  std::span<const WideRecord> records) {
  const auto rule = scoring_rule_for(config);
  std::vector<double> out;
  out.reserve(records.size());
  try {
    if (config.schema == InputSchema::kstep) {
      const KStepWeights weights(config.kstep_weights);
      for (const auto& rec : records) {
        out.push_back(kstep_score(rule, weights, rec.p, rec.y) -
                      kstep_score(rule, weights, rec.q, rec.y));
      }
    } else {
      for (const auto& rec : records) {
        std::vector<double> onehot(rec.p.size(), 0.0);
        onehot[static_cast<std::size_t>(rec.y - 1)] = 1.0;
        out.push_back(categorical_score(rule, rec.p, onehot) -
                      categorical_score(rule, rec.q, onehot));
      }
    }
  } catch (const std::exception& e) {
    throw DataError("row t=" + std::to_string(records[out.size()].t) + ": " + e.what());
  }
  return out;
}

CompareResult run_compare(const RunConfig& config, std::span<const double> dhats,
                          std::span<const std::size_t> times) {
  StreamComparator comparator(resolve(config));
  CompareResult result;
  result.rows.reserve(dhats.size());
  for (std::size_t i = 0; i < dhats.size(); ++i) {
    OutputRow row;
    try {
      row = comparator.push(dhats[i]);
    } catch (const std::domain_error& e) {
      throw DataError(e.what());
    }
    if (i < times.size()) row.t = times[i];
    if (!result.summary.first_decision_t && row.decision != Decision::undecided) {
      result.summary.first_decision_t = row.t;
    }
    result.summary.t = row.t;
    result.summary.final_decision = row.decision;
    result.rows.push_back(row);
  }
  return result;
}

namespace {

template <typename Record>
std::vector<std::size_t> times_of(std::span<const Record> records) {
  std::vector<std::size_t> t;
  t.reserve(records.size());
  for (const auto& r : records) t.push_back(r.t);
  return t;
}

}  // namespace

CompareResult run_compare(const RunConfig& config,
                          std::span<const ForecastRecord> records) {
  const auto d = differentials(config, records);
  return run_compare(config, d, times_of(records));
}

CompareResult run_compare(const RunConfig& config, std::span<const WideRecord> records) {
  const auto d = differentials(config, records);
  return run_compare(config, d, times_of(records));
}

SimulateResult run_simulate(const RunConfig& config) {
  config.validate();
  if (config.schema != InputSchema::binary && config.schema != InputSchema::odds) {
    throw UsageError("simulate produces binary forecasts only");
  }
  PathSpec spec;
  spec.p_name = config.p_name;
  spec.q_name = config.q_name;
  spec.horizon = config.horizon;
  spec.noise = config.noise;
  spec.rule = scoring_rule_for(config);

  SimulateResult out;
  try {
    out.data = simulate_path(spec, config.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<double> dhats;
  std::vector<std::size_t> times;
  for (const auto& s : out.data) {
    dhats.push_back(s.dhat);
    times.push_back(s.t);
  }
  out.results = run_compare(config, dhats, times);
  double sum_delta = 0.0;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    sum_delta += out.data[i].delta;
    out.results.rows[i].delta_true = sum_delta / static_cast<double>(i + 1);
  }
  return out;
}

void write_path_csv(std::ostream& out, std::span<const PathStep> path) {
  out << "t,p,q,y,r,delta\n";
  for (const auto& s : path) {
    out << s.t << ',' << format_double(s.p) << ',' << format_double(s.q) << ',' << s.y
        << ',' << format_double(s.r) << ',' << format_double(s.delta) << '\n';
  }
}

}  // namespace anytime
