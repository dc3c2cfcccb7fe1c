#include "anytime/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "anytime/forecasters.hpp"

namespace anytime {

DataError::DataError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

double american_odds_to_prob(long odds) {
  const double o = static_cast<double>(odds);
  if (odds >= 0) return 100.0 / (100.0 + o);
  return -o / (100.0 - o);
}

namespace {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  std::size_t column(const std::string& name) const {
    const auto it = columns.find(name);
    if (it == columns.end()) throw DataError("missing column '" + name + "'", 1);
    return it->second;
  }
  bool has(const std::string& name) const { return columns.count(name) > 0; }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

CsvTable read_table(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = split(line);
    if (!have_header) {
      table.header = cells;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!table.columns.emplace(cells[i], i).second) {
          throw DataError("duplicate column '" + cells[i] + "'", lineno);
        }
      }
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DataError("expected " + std::to_string(table.header.size()) +
                          " fields, got " + std::to_string(cells.size()),
                      lineno);
    }
    table.rows.push_back({lineno, std::move(cells)});
  }
  if (!have_header) throw DataError("empty input (no header)");
  return table;
}

double parse_real(const std::string& text, std::size_t line, const char* what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    // from_chars rejects "inf"/"nan" spellings some writers use.
    char* stop = nullptr;
    v = std::strtod(text.c_str(), &stop);
    if (text.empty() || stop != text.c_str() + text.size()) {
      throw DataError(std::string("cannot parse ") + what + " '" + text + "'", line);
    }
  }
  return v;
}

long parse_integer(const std::string& text, std::size_t line, const char* what) {
  long v = 0;
  std::string_view sv = text;
  if (sv.starts_with('+')) sv.remove_prefix(1);
  const auto* end = sv.data() + sv.size();
  const auto [ptr, ec] = std::from_chars(sv.data(), end, v);
  if (ec != std::errc() || ptr != end || sv.empty()) {
    throw DataError(std::string("cannot parse ") + what + " '" + text + "'", line);
  }
  return v;
}

double parse_probability(const std::string& text, std::size_t line, const char* what) {
  const double v = parse_real(text, line, what);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DataError(std::string(what) + " " + text + " outside [0,1]", line);
  }
  return v;
}

int parse_binary(const std::string& text, std::size_t line) {
  const long y = parse_integer(text, line, "outcome");
  if (y != 0 && y != 1) throw DataError("outcome must be 0 or 1, got " + text, line);
  return static_cast<int>(y);
}

class TimeChecker {
 public:
  std::size_t check(const std::string& text, std::size_t line) {
    const long t = parse_integer(text, line, "t");
    if (t < 0) throw DataError("negative time index", line);
    const auto tt = static_cast<std::size_t>(t);
    if (seen_ && tt <= last_) {
      throw DataError("time index " + text + " is not strictly increasing", line);
    }
    seen_ = true;
    last_ = tt;
    return tt;
  }

 private:
  bool seen_ = false;
  std::size_t last_ = 0;
};

std::vector<std::size_t> numbered_columns(const CsvTable& table, const std::string& prefix) {
  std::vector<std::size_t> cols;
  for (std::size_t k = 1;; ++k) {
    const auto name = prefix + std::to_string(k);
    if (!table.has(name)) break;
    cols.push_back(table.column(name));
  }
  return cols;
}

std::vector<WideRecord> read_wide(std::istream& in, const std::string& p_prefix,
                                  const std::string& q_prefix, bool categorical) {
  const auto table = read_table(in);
  const auto pc = numbered_columns(table, p_prefix);
  const auto qc = numbered_columns(table, q_prefix);
  if (pc.empty() || pc.size() != qc.size()) {
    throw DataError("expected matching " + p_prefix + "1.. and " + q_prefix +
                        "1.. columns",
                    1);
  }
  const auto ct = table.column("t");
  const auto cy = table.column("y");
  TimeChecker times;
  std::vector<WideRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    WideRecord rec;
    rec.t = times.check(row.cells[ct], row.line);
    for (auto c : pc) rec.p.push_back(parse_probability(row.cells[c], row.line, "forecast"));
    for (auto c : qc) rec.q.push_back(parse_probability(row.cells[c], row.line, "forecast"));
    if (categorical) {
      const long y = parse_integer(row.cells[cy], row.line, "class");
      if (y < 1 || y > static_cast<long>(pc.size())) {
        throw DataError("class index " + row.cells[cy] + " outside 1.." +
                            std::to_string(pc.size()),
                        row.line);
      }
      rec.y = static_cast<int>(y);
    } else {
      rec.y = parse_binary(row.cells[cy], row.line);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<ForecastRecord> read_binary_csv(std::istream& in) {
  const auto table = read_table(in);
  const auto ct = table.column("t");
  const auto cp = table.column("p");
  const auto cq = table.column("q");
  const auto cy = table.column("y");
  TimeChecker times;
  std::vector<ForecastRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    ForecastRecord rec;
    rec.t = times.check(row.cells[ct], row.line);
    rec.p = parse_probability(row.cells[cp], row.line, "forecast p");
    rec.q = parse_probability(row.cells[cq], row.line, "forecast q");
    rec.y = parse_binary(row.cells[cy], row.line);
    out.push_back(rec);
  }
  return out;
}

std::vector<ForecastRecord> read_odds_csv(std::istream& in) {
  const auto table = read_table(in);
  const auto ct = table.column("t");
  const auto cp = table.column("odds_p");
  const auto cq = table.column("odds_q");
  const auto cy = table.column("y");
  const bool p_opp = table.has("odds_p_opp");
  const bool q_opp = table.has("odds_q_opp");
  TimeChecker times;
  std::vector<ForecastRecord> out;
  auto implied = [&](const CsvRow& row, std::size_t col, bool has_opp,
                     const std::string& opp_name) {
    const double own = american_odds_to_prob(parse_integer(row.cells[col], row.line, "odds"));
    if (!has_opp) return own;
    const double opp = american_odds_to_prob(
        parse_integer(row.cells[table.column(opp_name)], row.line, "odds"));
    return rescale_pair(own, opp).first;
  };
  for (const auto& row : table.rows) {
    ForecastRecord rec;
    rec.t = times.check(row.cells[ct], row.line);
    rec.p = implied(row, cp, p_opp, "odds_p_opp");
    rec.q = implied(row, cq, q_opp, "odds_q_opp");
    rec.y = parse_binary(row.cells[cy], row.line);
    out.push_back(rec);
  }
  return out;
}

std::vector<WideRecord> read_kstep_csv(std::istream& in) {
  return read_wide(in, "p", "q", false);
}

std::vector<WideRecord> read_categorical_csv(std::istream& in) {
  return read_wide(in, "p_", "q_", true);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Decision parse_decision(std::string_view text) {
  if (text == "p_better") return Decision::p_better;
  if (text == "q_better") return Decision::q_better;
  if (text == "undecided") return Decision::undecided;
  throw DataError("unknown decision '" + std::string(text) + "'");
}

namespace {

const char* const kColumns[] = {"t",    "delta_hat", "vhat", "lcb",  "ucb",     "width",
                                "e_pq", "e_qp",      "p_pq", "p_qp", "decision"};

bool any_truth(std::span<const OutputRow> rows) {
  return std::any_of(rows.begin(), rows.end(),
                     [](const OutputRow& r) { return r.delta_true.has_value(); });
}

}  // namespace

void write_rows_csv(std::ostream& out, std::span<const OutputRow> rows) {
  const bool truth = any_truth(rows);
  for (std::size_t i = 0; i < std::size(kColumns); ++i) {
    out << (i ? "," : "") << kColumns[i];
  }
  if (truth) out << ",delta_true";
  out << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << format_double(r.delta_hat) << ',' << format_double(r.vhat) << ','
        << format_double(r.lcb) << ',' << format_double(r.ucb) << ','
        << format_double(r.width) << ',' << format_double(r.e_pq) << ','
        << format_double(r.e_qp) << ',' << format_double(r.p_pq) << ','
        << format_double(r.p_qp) << ',' << to_string(r.decision);
    if (truth) out << ',' << (r.delta_true ? format_double(*r.delta_true) : "");
    out << '\n';
  }
}

void write_rows_jsonl(std::ostream& out, std::span<const OutputRow> rows) {
  auto num = [](double x) -> nlohmann::json {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_double(x).c_str(), nullptr);
  };
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["delta_hat"] = num(r.delta_hat);
    j["vhat"] = num(r.vhat);
    j["lcb"] = num(r.lcb);
    j["ucb"] = num(r.ucb);
    j["width"] = num(r.width);
    j["e_pq"] = num(r.e_pq);
    j["e_qp"] = num(r.e_qp);
    j["p_pq"] = num(r.p_pq);
    j["p_qp"] = num(r.p_qp);
    j["decision"] = std::string(to_string(r.decision));
    if (r.delta_true) j["delta_true"] = num(*r.delta_true);
    out << j.dump() << '\n';
  }
}

std::vector<OutputRow> read_rows_csv(std::istream& in) {
  const auto table = read_table(in);
  std::vector<std::size_t> cols;
  for (const char* name : kColumns) cols.push_back(table.column(name));
  const bool truth = table.has("delta_true");
  std::vector<OutputRow> out;
  for (const auto& row : table.rows) {
    const auto& c = row.cells;
    auto real = [&](std::size_t k) { return parse_real(c[cols[k]], row.line, kColumns[k]); };
    OutputRow r;
    r.t = static_cast<std::size_t>(parse_integer(c[cols[0]], row.line, "t"));
    r.delta_hat = real(1);
    r.vhat = real(2);
    r.lcb = real(3);
    r.ucb = real(4);
    r.width = real(5);
    r.e_pq = real(6);
    r.e_qp = real(7);
    r.p_pq = real(8);
    r.p_qp = real(9);
    r.decision = parse_decision(c[cols[10]]);
    if (truth && !c[table.column("delta_true")].empty()) {
      r.delta_true = parse_real(c[table.column("delta_true")], row.line, "delta_true");
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace anytime
