#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "hammctr/cli.hpp"
#include "hammctr/core.hpp"
#include "hammctr/inclexcl.hpp"
#include "hammctr/satgadget.hpp"

using namespace hammctr;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> fields(const std::string &text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto eq = line.find('=');
    if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

class TempDir {
public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("hammctr_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string &name, const std::string &content = {}) const {
    auto p = (path_ / name).string();
    if (!content.empty()) std::ofstream(p) << content;
    return p;
  }

private:
  fs::path path_;
};

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("selector rule") {
  CHECK(cli::select_discrete(8, 30, std::uint64_t{1} << 30, 24) == "naive");
  CHECK(cli::select_discrete(4000, 10, std::uint64_t{1} << 30, 24) == "inclexcl");
  CHECK(cli::select_discrete(512, 2048, std::uint64_t{1} << 30, 24) == "matmul");
  CHECK(cli::select_discrete(512, 2048, 1000, 24) == "naive");
}

TEST_CASE("solve") {
  TempDir t;
  auto in = t.file("x.txt", "3 2 2\n0 0\n0 1\n1 1\n");
  auto r = run({"solve", "--input", in, "--mode", "discrete-closest", "--algo", "inclexcl", "--no-timing"});
  CHECK(r.code == cli::kOk);
  auto f = fields(r.out);
  CHECK(f["objective"] == "1");
  CHECK(f["index"] == "1");
  CHECK(f["center"] == "0,1");
  CHECK(f["algorithm"] == "inclexcl");
  CHECK(f.count("wall_ms") == 0);
  CHECK(r.out.rfind("mode=discrete-closest\nalgorithm=inclexcl\nobjective=1\nindex=1\ncenter=0,1\n", 0) == 0);

  r = run({"solve", "-i", in, "--mode", "discrete-remotest", "--algo", "matmul"});
  CHECK(r.code == 0);
  CHECK(fields(r.out)["objective"] == "1");
  CHECK(fields(r.out).count("wall_ms") == 1);
  CHECK(fields(r.out).count("counter.tau") == 1);

  r = run({"solve", "-i", in, "--mode", "continuous-closest", "--no-timing", "--json"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"mode\":\"continuous-closest\",\"algorithm\":\"brute-continuous\",\"objective\":1,\"index\":\"none\",\"center\":\"0,1\"}\n");

  r = run({"solve", "-i", in, "--algo", "auto", "--no-timing"});
  CHECK(fields(r.out)["objective"] == "1");
}

TEST_CASE("solve errors map to exit codes") {
  TempDir t;
  std::string row;
  for (int i = 0; i < 40; ++i) row += i ? " 0" : "0";
  auto wide = t.file("w.txt", "2 40 2\n" + row + "\n" + row + "\n");
  CHECK(run({"solve", "-i", wide, "--algo", "inclexcl"}).code == cli::kBudgetError);
  CHECK(run({"solve", "-i", t.file("missing.txt")}).code == cli::kInputError);
  CHECK(run({"solve", "-i", t.file("bad.txt", "1 2 2\n0 5\n")}).code == cli::kInputError);
  CHECK(run({"solve", "-i", wide, "--mode", "sideways"}).code == cli::kInputError);
  CHECK(run({"frobnicate"}).code == cli::kInputError);
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"solve", "-i", wide, "--mode", "continuous-closest"}).code == cli::kBudgetError);
  auto one = t.file("one.txt", "1 2 2\n0 1\n");
  CHECK(run({"solve", "-i", one, "--mode", "discrete-remotest"}).code == cli::kInputError);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("budget from environment") {
  ::setenv("HAMMCTR_BUDGET_MB", "3", 1);
  CHECK(cli::budget_from_env() == 3ULL << 20);
  ::setenv("HAMMCTR_BUDGET_MB", "junk", 1);
  CHECK(cli::budget_from_env() == kDefaultBudgetBytes);
  ::unsetenv("HAMMCTR_BUDGET_MB");
  CHECK(cli::budget_from_env() == kDefaultBudgetBytes);
}

TEST_CASE("gen") {
  TempDir t;
  auto a = t.file("a.txt"), b = t.file("b.txt");
  CHECK(run({"gen", "-n", "4", "-d", "3", "--sigma", "2", "--seed", "7", "-o", a}).code == 0);
  CHECK(run({"gen", "-n", "4", "-d", "3", "--sigma", "2", "--seed", "7", "-o", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(read_instance(slurp(a)).n() == 4);

  auto p = run({"gen", "--kind", "planted", "-n", "20", "-d", "12", "--sigma", "3", "--rho", "2", "--seed", "1"});
  CHECK(p.code == 0);
  CHECK(p.out.find("# center=") != std::string::npos);
  auto planted = read_instance(p.out);
  CHECK(naive_closest(planted).objective <= 4);

  auto z = run({"gen", "--kind", "planted", "-n", "5", "-d", "6", "--rho", "0", "--seed", "3"});
  CHECK(naive_closest(read_instance(z.out)).objective == 0);
  CHECK(run({"gen", "--kind", "planted", "-n", "5", "-d", "6", "--rho", "7"}).code == cli::kInputError);
}

TEST_CASE("reduce") {
  TempDir t;
  auto in = t.file("x.txt", "4 5 2\n0 0 1 1 0\n1 0 1 0 1\n1 1 1 1 1\n0 1 0 0 0\n");
  auto out = t.file("y.txt");
  auto r = run({"reduce", "--direction", "c2r", "-i", in, "-o", out, "--solve-through", "--no-timing"});
  CHECK(r.code == 0);
  const auto x = read_instance(slurp(in));
  CHECK(fields(r.out)["source_objective"] == std::to_string(naive_closest(x).objective));
  CHECK(fs::exists(out + ".map.jsonl"));
  CHECK(read_instance_file(out).n() == 8);

  auto c = run({"reduce", "--direction", "complement", "-i", in, "-o", out, "--solve-through", "--no-timing"});
  CHECK(c.code == 0);
  CHECK(fields(c.out)["source_objective"] == std::to_string(brute_continuous_closest(x).objective));

  auto tri = t.file("t.txt", "2 2 3\n0 2\n1 1\n");
  CHECK(run({"reduce", "--direction", "complement", "-i", tri, "-o", out}).code == cli::kInputError);
}

TEST_CASE("sat2remotest and certify") {
  TempDir t;
  auto f = t.file("f.qcnf", "p qcnf 4 2 2\n1!0 0\n3!1 0\n");
  auto out = t.file("g.txt");
  auto r = run({"reduce", "--direction", "sat2remotest", "-i", f, "-o", out, "--s", "2", "--member", "36",
                "--no-timing"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out + ".qcnf"));
  CHECK(fs::exists(out + ".map.jsonl"));
  auto c = run({"certify", "--formula", out + ".qcnf", "--instance", out, "--no-timing"});
  CHECK(c.code == 0);
  CHECK(c.out.find("result=PASS") != std::string::npos);
  CHECK(fields(c.out)["satisfiable"] == "yes");

  auto p = run({"certify", "--formula", f, "--pipeline", "--s", "2", "--no-timing"});
  CHECK(p.code == 0);
  CHECK(fields(p.out)["result"] == "PASS");

  auto u = t.file("u.qcnf", "p qcnf 2 2 2\n1!0 0\n1!1 0\n");
  auto pu = run({"certify", "--formula", u, "--pipeline", "--s", "2", "--no-timing"});
  CHECK(pu.code == 0);
  CHECK(fields(pu.out)["satisfiable"] == "no");

  CHECK(run({"reduce", "--direction", "sat2remotest", "-i", f, "-o", out, "--s", "2", "--member", "999999"}).code ==
        cli::kInputError);
  CHECK(run({"certify", "--formula", f}).code == cli::kInputError);
}

TEST_CASE("bench") {
  auto r = run({"bench", "--suite", "tiny", "--seed", "3", "--no-timing", "--verify"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("suite,algorithm,mode,n,d,sigma,seed,objective,index,wall_ms,counters\n", 0) == 0);
  CHECK(run({"bench", "--suite", "tiny", "--seed", "3", "--no-timing"}).out == r.out);
  CHECK(run({"bench", "--suite", "nope"}).code == cli::kInputError);
}
