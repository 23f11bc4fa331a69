#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "flm/cli.hpp"
#include "support.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = flm::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& file) { return support::models_dir() + "/" + file; }

std::string last_line(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t.back() == '\n') t.pop_back();
  return t.substr(t.find_last_of('\n') + 1);
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv("FLM_MAX_ITERS", value, 1); }
  ~EnvGuard() { unsetenv("FLM_MAX_ITERS"); }
};

}  // namespace

TEST_CASE("validate reports a summary") {
  Run r = run({"validate", model("child_labour.flm")});
  CHECK(r.code == 0);
  CHECK(r.out == "ok: 1 space, 1 flcm model\n");
  CHECK(r.err.empty());
  for (const char* f : {"transit.flm", "employee.flm", "relation_eq.flm", "speed.flm",
                        "grades.flm", "spaces.flm", "metrics.flm", "polynomials.flm"}) {
    CAPTURE(f);
    CHECK(run({"validate", model(f)}).code == 0);
  }
}

TEST_CASE("a broken file exits 1 with located diagnostics") {
  const std::string path = "cli_broken_model.flm";
  {
    std::ofstream f(path);
    f << "space s: chain 0 < a\nmatrix M over s: [a nope]\n";
  }
  Run r = run({"validate", path});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find(path + ":2:") == 0);
  CHECK(r.err.find("error[unknown-term]") != std::string::npos);
  std::remove(path.c_str());

  Run missing = run({"validate", "does_not_exist.flm"});
  CHECK(missing.code == 1);
  CHECK(missing.err.rfind("error: ", 0) == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"compose", "--model", model("relation_eq.flm"), "--a", "P"}).code == 2);
  CHECK(run({"--format", "xml", "validate", model("speed.flm")}).code == 2);
  CHECK(run({"compose", "--model", model("relation_eq.flm"), "--a", "P", "--b", "Q",
             "--pair", "sideways"})
            .code == 2);
  CHECK(run({"poly", "--model", model("polynomials.flm"), "--p", "p", "--q", "q", "--op",
             "avg"})
            .code == 2);
}

TEST_CASE("compose output matches the golden file") {
  Run r = run({"compose", "--model", model("relation_eq.flm"), "--a", "P", "--b", "Q",
               "--pair", "maxmin"});
  CHECK(r.code == 0);
  CHECK(r.out == support::read_file(support::golden_dir() + "/compose_P_Q_maxmin.txt"));

  Run flre = run({"compose-flre", "--model", model("relation_eq.flm"), "--p", "P", "--q", "Q"});
  CHECK(flre.code == 0);
  CHECK(flre.out.rfind("R = P o Q (maxmin)\n", 0) == 0);

  Run mismatch = run({"compose", "--model", model("relation_eq.flm"), "--a", "Q", "--b", "P"});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.rfind("error[shape-mismatch]", 0) == 0);
}

TEST_CASE("run-flcm reaches the transit fixed point") {
  Run r = run({"run-flcm", "--model", model("transit.flm"), "--initial", "X", "--pair",
               "maxmax"});
  CHECK(r.code == 0);
  CHECK(last_line(r.out).rfind("fixed-point: ", 0) == 0);
  CHECK(r.out.find("iterations: 3\n") != std::string::npos);

  Run records = run({"--format", "records", "run-flcm", "--model", model("transit.flm"),
                     "--initial", "X", "--pair", "maxmax"});
  CHECK(records.code == 0);
  CHECK(last_line(records.out).rfind("cycle_length=1 iterations=3 pattern=fixed-point values=",
                                     0) == 0);
  CHECK(records.out ==
        run({"--format", "records", "run-flcm", "--model", model("transit.flm"), "--initial",
             "X", "--pair", "maxmax"})
            .out);
}

TEST_CASE("records have sorted keys") {
  Run r = run({"--format", "records", "classify-space", "--model", model("spaces.flm")});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  int count = 0;
  for (std::string line; std::getline(lines, line); ++count) {
    std::vector<std::string> keys;
    std::istringstream fields(line);
    for (std::string field; fields >> field;)
      if (auto eq = field.find('='); eq != std::string::npos && field.front() != '"')
        keys.push_back(field.substr(0, eq));
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(line.find("space=") != std::string::npos);
  }
  CHECK(count == 6);
}

TEST_CASE("the iteration cap comes from the environment") {
  {
    EnvGuard env("1");
    Run r = run({"run-flcm", "--model", model("transit.flm"), "--initial", "X"});
    CHECK(r.code == 1);
    CHECK(r.err.find("iteration-cap-exceeded") != std::string::npos);
  }
  {
    EnvGuard env("lots");
    Run r = run({"run-flcm", "--model", model("transit.flm"), "--initial", "X"});
    CHECK(r.code == 2);
  }
  {
    EnvGuard env("1");
    Run r = run({"run-flcm", "--model", model("transit.flm"), "--initial", "X",
                 "--max-iters", "50"});
    CHECK(r.code == 0);
  }
}

TEST_CASE("other subcommands run") {
  Run space = run({"classify-space", "--model", model("spaces.flm"), "--space", "cancer"});
  CHECK(space.code == 0);
  CHECK(space.out.rfind("space: cancer\n", 0) == 0);
  CHECK(space.out.find("  lattice: yes\n") != std::string::npos);

  Run topo = run({"classify-topology", "--model", model("metrics.flm"), "--metric",
                  "mark_metric", "--experts", "panel"});
  CHECK(topo.code == 0);
  CHECK(topo.out.find("metric kind: discrete") != std::string::npos);

  Run graph = run({"graph", "--model", model("grades.flm"), "--graph", "influence"});
  CHECK(graph.code == 0);
  CHECK(graph.out.find("connected: yes") != std::string::npos);
  CHECK(run({"graph", "--model", model("grades.flm")}).code == 2);

  Run flrm = run({"run-flrm", "--model", model("employee.flm"), "--initial", "X"});
  CHECK(flrm.code == 0);
  CHECK(flrm.out.find("Y0: ") != std::string::npos);
  CHECK(flrm.out.find(" domain: ") != std::string::npos);

  Run poly = run({"poly", "--model", model("polynomials.flm"), "--p", "p", "--q", "q"});
  CHECK(poly.code == 0);
  CHECK(poly.out ==
        "min: better + very_bad x^1 + fair x^2\n  degree: 2\n"
        "max: good + bad x^1 + very_fair x^2 + best x^3 + good x^4\n  degree: 4\n");

  Run ff = run({"feedforward", "--model", model("relation_eq.flm"), "--input", "T",
                "--layers", "Q", "--activation", "-"});
  CHECK(ff.code == 0);

  Run literal = run({"run-flcm", "--model", model("transit.flm"), "--initial",
                     "(often, 0, 0, 0, 0, 0, 0, 0)"});
  CHECK(literal.code == 0);
  Run bad_literal = run({"run-flcm", "--model", model("transit.flm"), "--initial", "(often"});
  CHECK(bad_literal.code == 1);
}
