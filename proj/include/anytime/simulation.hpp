#pragma once

// Monte Carlo drivers for the synthetic forecasting game. Every run is a pure
// function of its seed, so the OpenMP drivers produce results identical to
// the serial reference drivers, run by run.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anytime/boundaries.hpp"
#include "anytime/confseq.hpp"
#include "anytime/scoring.hpp"

namespace anytime {

/// One simulated round, including the oracle differential delta.
struct PathStep {
  std::size_t t = 0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  int y = 0;
  double dhat = 0.0;
  double delta = 0.0;
};

struct PathSpec {
  std::string p_name = "laplace";
  std::string q_name = "k29_poly3";
  std::size_t horizon = 10'000;
  bool noise = true;
  ScoringRule rule = ScoringRule::brier();
};

/// Plays the changepoint game: reality and outcomes drawn from `seed`.
std::vector<PathStep> simulate_path(const PathSpec& spec, std::uint64_t seed);

enum class CsMethod { hoeffding, eb };

struct CsConfig {
  CsMethod method = CsMethod::eb;
  UniformBoundary boundary = UniformBoundary::stitched95();
  Centering centering = Centering::mean;
};

struct RunSummary {
  bool miscovered = false;       // Delta_t outside C_t for some t
  std::size_t first_miss = 0;    // 0 if never
  std::size_t first_decision = 0;
  ConfInterval final_ci;
  double final_delta = 0.0;      // oracle Delta_T
  double final_delta_hat = 0.0;
};

/// Tracks one confidence sequence along a path of differentials.
RunSummary evaluate_path(std::span<const PathStep> path, const CsConfig& config,
                         double bound);

struct CoverageResult {
  // summaries[config][run]
  std::vector<std::vector<RunSummary>> summaries;

  double miscoverage_rate(std::size_t config) const;
  double fraction_final_above_zero(std::size_t config) const;
  std::size_t runs() const { return summaries.empty() ? 0 : summaries.front().size(); }
};

/// Runs `runs` paths with seeds base_seed, base_seed+1, ... and evaluates
/// every configuration on each path.
CoverageResult run_coverage_serial(const PathSpec& spec,
                                   std::span<const CsConfig> configs,
                                   std::size_t runs, std::uint64_t base_seed);
CoverageResult run_coverage_parallel(const PathSpec& spec,
                                     std::span<const CsConfig> configs,
                                     std::size_t runs, std::uint64_t base_seed);

/// Symmetric-null game: r_t ~ U[d, 1-d], p = r + d, q = r - d, Brier score,
/// so every true differential is exactly zero.
struct NullSpec {
  std::size_t horizon = 5000;
  double offset = 0.1;
  double rho = 1.0;
  double c = 2.0;
  double lambda = 0.25;      // fixed-lambda e-process, < 1/c
  double alpha = 0.05;
  double stop_level = 20.0;  // tau stops early once E_t reaches this level
};

struct NullRunResult {
  std::size_t tau_mixture = 0;
  std::size_t tau_fixed = 0;
  double e_tau_mixture = 0.0;  // pq direction
  double e_tau_fixed = 0.0;    // pq direction
  bool rejected_pq = false;    // min_t p_t <= alpha, mixture
  bool rejected_qp = false;
};

/// tau = min(U, first t with E_t >= stop_level), U ~ Uniform{1..horizon}.
NullRunResult run_null_path(const NullSpec& spec, std::uint64_t seed);

std::vector<NullRunResult> run_null_serial(const NullSpec& spec, std::size_t runs,
                                           std::uint64_t base_seed);
std::vector<NullRunResult> run_null_parallel(const NullSpec& spec, std::size_t runs,
                                             std::uint64_t base_seed);

}  // namespace anytime
