#pragma once

// Online comparison of two forecast streams: confidence sequence, e-values
// and p-values per row, plus the simulation driver behind `simulate`.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "anytime/boundaries.hpp"
#include "anytime/confseq.hpp"
#include "anytime/eprocess.hpp"
#include "anytime/io.hpp"
#include "anytime/scoring.hpp"
#include "anytime/simulation.hpp"

namespace anytime {

/// Invalid option combination; maps to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class InputSchema { binary, odds, kstep, categorical };

struct RunConfig {
  // scoring
  std::string score = "brier";
  double epsilon = 0.01;
  std::optional<double> winkler_q0;
  InputSchema schema = InputSchema::binary;
  std::vector<double> kstep_weights;

  // inference
  double alpha = 0.05;
  std::string boundary = "gamma-exponential";  // | normal-mixture | stitched95
  std::optional<CsMethod> cs;                  // default follows the boundary
  std::optional<double> c;                     // sub-exponential scale, default 2b
  std::optional<double> rho;
  std::optional<double> v_opt;                 // default 10 when rho is absent
  Centering gamma_mode = Centering::mean;
  bool intersect = false;
  std::optional<double> lambda;                // fixed-lambda e-process

  // simulation
  std::string p_name = "k29_poly3";
  std::string q_name = "laplace";
  std::size_t horizon = 10'000;
  bool noise = true;
  std::uint64_t seed = 0;

  /// Throws UsageError.
  void validate() const;
};

/// RunConfig with every default filled in for a differential bound b.
struct ResolvedConfig {
  ScoringRule rule;
  double bound = 1.0;
  CsMethod method = CsMethod::eb;
  UniformBoundary boundary = UniformBoundary::stitched95();
  GammaExponentialMixture evidence{1.0, 2.0};
  std::optional<double> lambda;
  Centering centering = Centering::mean;
  bool intersect = false;
};

ScoringRule scoring_rule_for(const RunConfig& config);
double differential_bound(const RunConfig& config);
ResolvedConfig resolve(const RunConfig& config);

/// Feeds pointwise differentials one at a time; row t depends only on
/// differentials 1..t.
class StreamComparator {
 public:
  explicit StreamComparator(ResolvedConfig config);

  OutputRow push(double dhat);
  const ComparisonState& state() const { return state_; }

 private:
  ResolvedConfig cfg_;
  ComparisonState state_;
  EvidenceState ev_pq_{Direction::pq};
  EvidenceState ev_qp_{Direction::qp};
  std::optional<ConfInterval> running_;
  double hint_ = -std::numeric_limits<double>::infinity();
};

struct CompareSummary {
  std::size_t t = 0;
  Decision final_decision = Decision::undecided;
  std::optional<std::size_t> first_decision_t;
};

struct CompareResult {
  std::vector<OutputRow> rows;
  CompareSummary summary;
};

std::string summary_line(const CompareSummary& summary);

/// Pointwise differentials of binary records under the configured rule.
std::vector<double> differentials(const RunConfig& config,
                                  std::span<const ForecastRecord> records);
std::vector<double> differentials(const RunConfig& config,
                                  std::span<const WideRecord> records);

CompareResult run_compare(const RunConfig& config, std::span<const double> dhats,
                          std::span<const std::size_t> times);
CompareResult run_compare(const RunConfig& config,
                          std::span<const ForecastRecord> records);
CompareResult run_compare(const RunConfig& config, std::span<const WideRecord> records);

struct SimulateResult {
  std::vector<PathStep> data;
  CompareResult results;  // rows carry delta_true
};

SimulateResult run_simulate(const RunConfig& config);

/// t,p,q,y,r,delta
void write_path_csv(std::ostream& out, std::span<const PathStep> path);

}  // namespace anytime
