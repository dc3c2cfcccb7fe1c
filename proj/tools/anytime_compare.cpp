// anytime-compare: sequential comparison of two probability forecasters.
//
//   anytime-compare compare --input games.csv --output rows.csv
//   anytime-compare simulate --p k29_poly3 --q laplace --seed 7 --output rows.csv
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "anytime/io.hpp"
#include "anytime/pipeline.hpp"

namespace {

using namespace anytime;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;

const char* kSchemaHelp = R"(Input schemas (header row required, columns in any order):
  binary       t,p,q,y            p,q in [0,1], y in {0,1}   (default)
  odds         t,odds_p,odds_q,y  American odds; optional odds_p_opp,odds_q_opp
                                  columns rescale each implied pair to sum to 1
  kstep        t,p1..pK,q1..qK,y  p_k is the k-step-ahead forecast of y;
                                  combined with --weights w1,..,wK (sum 1)
  categorical  t,p_1..p_K,q_1..q_K,y
                                  class probabilities; y is the class in 1..K
t must be strictly increasing. --odds is shorthand for --schema odds.

Output columns:
  t,delta_hat,vhat,lcb,ucb,width,e_pq,e_qp,p_pq,p_qp,decision
simulate adds delta_true. --json writes one object per line with the same keys.
A summary line with the final decision goes to stderr.)";

struct Options {
  RunConfig config;
  std::string input;
  std::string output = "-";
  std::string pairs;
  std::string data_out;
  std::string schema = "binary";
  std::string cs;
  std::string gamma_mode = "mean";
  bool odds = false;
  bool json = false;
  bool no_noise = false;
};

void add_inference_options(CLI::App& app, Options& o) {
  app.add_option("--score", o.config.score,
                 "brier | spherical | zero-one | log (truncated at --epsilon)")
      ->capture_default_str();
  app.add_option("--epsilon", o.config.epsilon, "truncation level of the log score")
      ->capture_default_str();
  app.add_option("--winkler-q0", o.config.winkler_q0,
                 "use the Winkler score with baseline q and reference level q0");
  app.add_option("--alpha", o.config.alpha, "error level of the two-sided CS")
      ->capture_default_str();
  app.add_option("--boundary", o.config.boundary,
                 "gamma-exponential | normal-mixture | stitched95")
      ->capture_default_str();
  app.add_option("--cs", o.cs,
                 "hoeffding | eb (default: eb, or hoeffding for normal-mixture)");
  app.add_option("--c", o.config.c, "sub-exponential scale, at least 2b (default 2b)");
  auto* rho = app.add_option("--rho", o.config.rho, "mixture precision");
  auto* vopt = app.add_option("--v-opt", o.config.v_opt,
                              "intrinsic time at which the boundary is tightest (default 10)");
  rho->excludes(vopt);
  app.add_option("--gamma-mode", o.gamma_mode, "centering of V_hat: mean | zero")
      ->capture_default_str();
  app.add_flag("--intersect", o.config.intersect, "report the running intersection of the CS");
  app.add_option("--lambda", o.config.lambda,
                 "fixed-lambda e-process instead of the mixture, lambda in [0, 1/c)");
  app.add_flag("--json", o.json, "emit JSON lines instead of CSV");
}

Centering parse_centering(const std::string& s) {
  if (s == "mean") return Centering::mean;
  if (s == "zero") return Centering::zero;
  throw UsageError("--gamma-mode must be mean or zero");
}

std::optional<CsMethod> parse_cs(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "hoeffding") return CsMethod::hoeffding;
  if (s == "eb") return CsMethod::eb;
  throw UsageError("--cs must be hoeffding or eb");
}

InputSchema parse_schema(const std::string& s, bool odds) {
  InputSchema schema;
  if (s == "binary") {
    schema = InputSchema::binary;
  } else if (s == "odds") {
    schema = InputSchema::odds;
  } else if (s == "kstep") {
    schema = InputSchema::kstep;
  } else if (s == "categorical") {
    schema = InputSchema::categorical;
  } else {
    throw UsageError("unknown schema '" + s + "'");
  }
  if (odds) {
    if (schema != InputSchema::binary && schema != InputSchema::odds) {
      throw UsageError("--odds conflicts with --schema " + s);
    }
    schema = InputSchema::odds;
  }
  return schema;
}

void finish_config(Options& o) {
  o.config.gamma_mode = parse_centering(o.gamma_mode);
  o.config.cs = parse_cs(o.cs);
  o.config.schema = parse_schema(o.schema, o.odds);
  o.config.noise = !o.no_noise;
  if (const char* env = std::getenv("ANYTIME_COMPARE_SEED")) {
    try {
      std::size_t used = 0;
      o.config.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError("ANYTIME_COMPARE_SEED is not an unsigned integer");
    }
  }
  o.config.validate();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::string render(const std::vector<OutputRow>& rows, bool json) {
  std::ostringstream out;
  if (json) {
    write_rows_jsonl(out, rows);
  } else {
    write_rows_csv(out, rows);
  }
  return out.str();
}

CompareResult compare_stream(const RunConfig& config, std::istream& in) {
  switch (config.schema) {
    case InputSchema::binary:
      return run_compare(config, read_binary_csv(in));
    case InputSchema::odds:
      return run_compare(config, read_odds_csv(in));
    case InputSchema::kstep:
      return run_compare(config, read_kstep_csv(in));
    case InputSchema::categorical:
      return run_compare(config, read_categorical_csv(in));
  }
  throw UsageError("unknown schema");
}

CompareResult compare_file(const RunConfig& config, const std::string& path) {
  if (path == "-") return compare_stream(config, std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return compare_stream(config, in);
}

struct Pair {
  std::string input;
  std::string output;
};

std::vector<Pair> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pairs file '" + path + "'");
  std::vector<Pair> pairs;
  std::string line;
  std::size_t lineno = 0;
  int in_col = -1;
  int out_col = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (in_col < 0) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "input") in_col = static_cast<int>(i);
        if (fields[i] == "output") out_col = static_cast<int>(i);
      }
      if (in_col < 0 || out_col < 0) {
        throw DataError("pairs file needs an input,output header", lineno);
      }
      continue;
    }
    const auto need = static_cast<std::size_t>(std::max(in_col, out_col));
    if (fields.size() <= need) throw DataError("missing field", lineno);
    pairs.push_back({fields[static_cast<std::size_t>(in_col)],
                     fields[static_cast<std::size_t>(out_col)]});
  }
  return pairs;
}

int run_pairs(const Options& o) {
  const auto pairs = read_pairs(o.pairs);
  std::vector<int> codes(pairs.size(), kOk);
  std::vector<std::string> messages(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& pair = pairs[static_cast<std::size_t>(i)];
    auto& msg = messages[static_cast<std::size_t>(i)];
    try {
      const auto result = compare_file(o.config, pair.input);
      write_text(pair.output, render(result.rows, o.json));
      msg = pair.input + ": " + summary_line(result.summary);
    } catch (const UsageError& e) {
      codes[static_cast<std::size_t>(i)] = kUsage;
      msg = pair.input + ": error: " + e.what();
    } catch (const std::exception& e) {
      codes[static_cast<std::size_t>(i)] = kData;
      msg = pair.input + ": error: " + e.what();
    }
  }
  int rc = kOk;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::cerr << messages[i] << '\n';
    rc = std::max(rc, codes[i]);
  }
  return rc;
}

int run_compare_command(Options& o) {
  finish_config(o);
  if (!o.pairs.empty()) return run_pairs(o);
  if (o.input.empty()) throw UsageError("compare needs --input or --pairs");
  const auto result = compare_file(o.config, o.input);
  write_text(o.output, render(result.rows, o.json));
  std::cerr << summary_line(result.summary) << '\n';
  return kOk;
}

int run_simulate_command(Options& o) {
  finish_config(o);
  const auto sim = run_simulate(o.config);
  if (!o.data_out.empty()) {
    std::ostringstream data;
    write_path_csv(data, sim.data);
    write_text(o.data_out, data.str());
  }
  write_text(o.output, render(sim.results.rows, o.json));
  std::cerr << summary_line(sim.results.summary) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime-valid comparison of probability forecasters"};
  app.require_subcommand(1);
  app.footer(kSchemaHelp);

  Options o;

  auto* compare = app.add_subcommand("compare", "compare two forecast columns of a CSV");
  compare->footer(kSchemaHelp);
  compare->add_option("--input", o.input, "input CSV ('-' for stdin)");
  compare->add_option("--output", o.output, "output file ('-' for stdout)")
      ->capture_default_str();
  compare->add_option("--pairs", o.pairs,
                      "CSV with header input,output; every pair runs independently");
  compare->add_option("--schema", o.schema, "binary | odds | kstep | categorical")
      ->capture_default_str();
  compare->add_flag("--odds", o.odds, "input holds American odds (t,odds_p,odds_q,y)");
  compare->add_option("--weights", o.config.kstep_weights,
                      "k-step horizon weights, comma separated")
      ->delimiter(',');
  add_inference_options(*compare, o);

  auto* simulate = app.add_subcommand("simulate", "run two forecasters on synthetic data");
  simulate->add_option("--p", o.config.p_name,
                       "forecaster p: always_<v> | laplace | k29_poly<d> | k29_rbf<sigma>")
      ->capture_default_str();
  simulate->add_option("--q", o.config.q_name, "forecaster q")->capture_default_str();
  simulate->add_option("--horizon", o.config.horizon, "number of rounds")
      ->capture_default_str();
  simulate->add_option("--seed", o.config.seed, "random seed")->capture_default_str();
  simulate->add_flag("--no-noise", o.no_noise, "noise-free reality sequence");
  simulate->add_option("--data-out", o.data_out, "write t,p,q,y,r,delta here");
  simulate->add_option("--output", o.output, "results file ('-' for stdout)")
      ->capture_default_str();
  add_inference_options(*simulate, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (compare->parsed()) return run_compare_command(o);
    return run_simulate_command(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
}
