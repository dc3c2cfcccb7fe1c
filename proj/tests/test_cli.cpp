#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "anytime/io.hpp"

namespace fs = std::filesystem;

namespace {

struct ScratchDir {
  fs::path dir = fs::temp_directory_path() / ("anytime_cli_" + std::to_string(::getpid()));
  ScratchDir() { fs::create_directories(dir); }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

const fs::path& workdir() {
  static const ScratchDir scratch;
  return scratch.dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" ANYTIME_COMPARE_EXE "\" " + args + " 2>" +
                          path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& file, const std::string& text) { std::ofstream(file) << text; }

const std::string kFixture = ANYTIME_FIXTURE_DIR "/ws2019.csv";

}  // namespace

TEST_CASE("compare on the fixture") {
  REQUIRE(run("compare --input " + kFixture + " --output " + path("a.csv")) == 0);
  const std::string out = slurp(path("a.csv"));
  CHECK(out.starts_with("t,delta_hat,vhat,lcb,ucb,width,e_pq,e_qp,p_pq,p_qp,decision\n"));
  std::istringstream in(out);
  const auto rows = anytime::read_rows_csv(in);
  REQUIRE(rows.size() == 7);
  CHECK(rows.back().delta_hat == doctest::Approx(-0.006876).epsilon(1e-6 / 0.006876));
  CHECK(slurp(path("stderr.txt")).find("summary: t=7 decision=undecided") != std::string::npos);

  // byte-identical replay, also through stdout
  REQUIRE(run("compare --input " + kFixture + " --output " + path("b.csv")) == 0);
  CHECK(slurp(path("b.csv")) == out);
  REQUIRE(run("compare --input " + kFixture + " > " + path("c.csv")) == 0);
  CHECK(slurp(path("c.csv")) == out);
}

TEST_CASE("json output") {
  REQUIRE(run("compare --json --input " + kFixture + " --output " + path("a.jsonl")) == 0);
  std::istringstream in(slurp(path("a.jsonl")));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("t") == n + 1);
    CHECK(j.at("decision") == "undecided");
    ++n;
  }
  CHECK(n == 7);
}

TEST_CASE("exit codes") {
  CHECK(run("compare --input " + kFixture + " --boundary normal-mixture --cs eb") == 1);
  CHECK(run("compare --input " + kFixture + " --boundary bogus") == 1);
  CHECK(run("compare --input " + kFixture + " --rho 1 --v-opt 3") == 1);
  CHECK(run("compare --input " + kFixture + " --alpha 0.1 --boundary stitched95") == 1);
  CHECK(run("compare --no-such-flag") == 1);
  CHECK(run("") == 1);
  CHECK(slurp(path("stderr.txt")).size() > 0);
  CHECK(run("compare --input " + path("missing.csv")) == 2);
  CHECK(slurp(path("stderr.txt")).starts_with("data error:"));
  write(path("bad.csv"), "t,p,q,y\n1,0.5,0.5,1\n2,0.5,1.5,0\n");
  CHECK(run("compare --input " + path("bad.csv")) == 2);
  CHECK(slurp(path("stderr.txt")).find("line 3") != std::string::npos);
  CHECK(run("--help > " + path("help.txt")) == 0);
}

TEST_CASE("help lists the input schemas") {
  REQUIRE(run("compare --help > " + path("help.txt")) == 0);
  const std::string help = slurp(path("help.txt"));
  for (const char* s : {"binary", "odds", "kstep", "categorical", "--pairs", "--json"}) {
    CHECK(help.find(s) != std::string::npos);
  }
}

TEST_CASE("odds input") {
  write(path("odds.csv"), "t,odds_p,odds_q,y\n1,-140,120,1\n2,-110,105,0\n");
  CHECK(run("compare --odds --input " + path("odds.csv") + " --output " + path("o1.csv")) == 0);
  CHECK(run("compare --schema odds --input " + path("odds.csv") + " --output " +
            path("o2.csv")) == 0);
  CHECK(slurp(path("o1.csv")) == slurp(path("o2.csv")));
}

TEST_CASE("batch pairs") {
  write(path("p2.csv"), "t,p,q,y\n1,0.9,0.1,1\n2,0.8,0.3,1\n3,0.7,0.4,0\n");
  write(path("pairs.csv"), "input,output\n" + kFixture + "," + path("o_a.csv") + "\n" +
                               path("p2.csv") + "," + path("o_b.csv") + "\n");
  REQUIRE(run("compare --pairs " + path("pairs.csv")) == 0);
  REQUIRE(run("compare --input " + kFixture + " --output " + path("single_a.csv")) == 0);
  REQUIRE(run("compare --input " + path("p2.csv") + " --output " + path("single_b.csv")) == 0);
  CHECK(slurp(path("o_a.csv")) == slurp(path("single_a.csv")));
  CHECK(slurp(path("o_b.csv")) == slurp(path("single_b.csv")));

  write(path("pairs_bad.csv"), "input,output\n" + kFixture + "," + path("o_c.csv") + "\n" +
                                   path("missing.csv") + "," + path("o_d.csv") + "\n");
  CHECK(run("compare --pairs " + path("pairs_bad.csv")) == 2);
  CHECK(fs::exists(path("o_c.csv")));
}

TEST_CASE("simulate") {
  const std::string base = "simulate --p k29_poly3 --q laplace --horizon 400 ";
  REQUIRE(run(base + "--seed 3 --output " + path("s1.csv") + " --data-out " + path("d1.csv")) ==
          0);
  const std::string rows = slurp(path("s1.csv"));
  CHECK(rows.starts_with(
      "t,delta_hat,vhat,lcb,ucb,width,e_pq,e_qp,p_pq,p_qp,decision,delta_true\n"));
  CHECK(slurp(path("d1.csv")).starts_with("t,p,q,y,r,delta\n"));

  // delta_true is the running mean of the per-round delta column
  std::istringstream data(slurp(path("d1.csv")));
  std::string line;
  std::getline(data, line);
  double sum = 0.0;
  std::size_t n = 0;
  std::istringstream in(rows);
  const auto parsed = anytime::read_rows_csv(in);
  while (std::getline(data, line)) {
    sum += std::stod(line.substr(line.rfind(',') + 1));
    REQUIRE(parsed[n].delta_true.has_value());
    const double running = sum / static_cast<double>(n + 1);
    CHECK(*parsed[n].delta_true == doctest::Approx(running).epsilon(1e-7));
    ++n;
  }
  CHECK(n == 400);

  REQUIRE(run(base + "--seed 3 --output " + path("s2.csv")) == 0);
  CHECK(slurp(path("s2.csv")) == rows);
  REQUIRE(run(base + "--seed 4 --output " + path("s3.csv")) == 0);
  CHECK(slurp(path("s3.csv")) != rows);
  REQUIRE(run(base + "--seed 4 --output " + path("s4.csv"), "ANYTIME_COMPARE_SEED=3") == 0);
  CHECK(slurp(path("s4.csv")) == rows);
  CHECK(run(base + "--output " + path("s5.csv"), "ANYTIME_COMPARE_SEED=abc") == 1);
  CHECK(run("simulate --p oracle --horizon 10") == 1);
}
