#pragma once

// CSV ingestion and OutputRow serialization for the command-line tool.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "anytime/confseq.hpp"

namespace anytime {

/// Malformed input data; carries the 1-based line number when known.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ForecastRecord {
  std::size_t t = 0;
  double p = 0.0;
  double q = 0.0;
  int y = 0;
};

/// Multi-horizon (p1..pK, q1..qK, binary y) or categorical
/// (p_1..p_K, q_1..q_K, y = class index in 1..K) rows.
struct WideRecord {
  std::size_t t = 0;
  std::vector<double> p;
  std::vector<double> q;
  int y = 0;
};

struct OutputRow {
  std::size_t t = 0;
  double delta_hat = 0.0;
  double vhat = 0.0;
  double lcb = 0.0;
  double ucb = 0.0;
  double width = 0.0;
  double e_pq = 1.0;
  double e_qp = 1.0;
  double p_pq = 1.0;
  double p_qp = 1.0;
  Decision decision = Decision::undecided;
  std::optional<double> delta_true;  // simulator oracle only
};

/// Implied probability of American odds: 100/(100+o) for o >= 0,
/// -o/(100-o) otherwise.
double american_odds_to_prob(long odds);

/// Header t,p,q,y (any column order, extra columns ignored).
std::vector<ForecastRecord> read_binary_csv(std::istream& in);

/// Header t,odds_p,odds_q,y with optional odds_p_opp,odds_q_opp columns; when
/// an opponent column is present the implied pair is rescaled to sum to 1.
std::vector<ForecastRecord> read_odds_csv(std::istream& in);

/// Header t,p1..pK,q1..qK,y.
std::vector<WideRecord> read_kstep_csv(std::istream& in);

/// Header t,p_1..p_K,q_1..q_K,y.
std::vector<WideRecord> read_categorical_csv(std::istream& in);

/// 9 significant digits.
std::string format_double(double x);
Decision parse_decision(std::string_view text);

void write_rows_csv(std::ostream& out, std::span<const OutputRow> rows);
void write_rows_jsonl(std::ostream& out, std::span<const OutputRow> rows);
std::vector<OutputRow> read_rows_csv(std::istream& in);

}  // namespace anytime
