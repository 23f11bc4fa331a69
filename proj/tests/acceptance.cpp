// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fail.
#include <algorithm>
#include <array>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "flm/inference.hpp"
#include "flm/lingpoly.hpp"
#include "flm/metric.hpp"
#include "flm/modelfile.hpp"
#include "support.hpp"

using namespace flm;
using Names = std::vector<std::string>;

namespace {

// Collects the first mismatch of a criterion.
struct Check {
  std::string failure;
  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
  void names(const Names& got, const Names& want, const std::string& what) {
    if (got == want || !failure.empty()) return;
    auto join = [](const Names& n) {
      std::string s;
      for (const auto& t : n) s += (s.empty() ? "" : " ") + t;
      return s;
    };
    failure = what + ": got (" + join(got) + "), expected (" + join(want) + ")";
  }
};

using Criterion = std::function<void(Check&)>;

void speed_quadruple(Check& c) {
  auto b = support::load_model("speed.flm");
  const LingMatrix& x = b.states.at("X").values;
  const LingMatrix& m = b.matrices.at("M");
  c.names(compose(x, m, OperatorPair::min_min()).names(),
          {"very_slow", "very_slow", "very_slow", "very_slow"}, "minmin");
  c.names(compose(x, m, OperatorPair::max_min()).names(),
          {"just_fast", "medium", "fast", "fast"}, "maxmin");
  c.names(compose(x, m, OperatorPair::min_max()).names(), {"slow", "slow", "medium", "slow"},
          "minmax");
  c.names(compose(x, m, OperatorPair::max_max()).names(),
          {"very_fast", "very_fast", "very_fast", "very_fast"}, "maxmax");
}

void zero_rule(Check& c) {
  auto b = support::load_model("grades.flm");
  const LingMatrix& z = b.matrices.at("Z");
  c.expect(compose(z, z, OperatorPair::min_min()).is_zero(), "displayed Z o Z is not zero");
  std::mt19937 rng(42);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  for (int round = 0; round < 200; ++round) {
    auto s = support::numbered_chain("five", 5);
    const std::size_t n = size(rng);
    LingMatrix a = support::random_matrix(rng, s, n, n);
    std::uniform_int_distribution<std::size_t> col(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      a.set(i, col(rng), s->zero());
      a.set(col(rng), i, s->zero());
    }
    c.expect(compose(a, a, OperatorPair::min_min()).is_zero(),
             "random round " + std::to_string(round) + " is not zero");
  }
}

void scalar_quadruple(Check& c) {
  auto b = support::load_model("grades.flm");
  const LingMatrix& y = b.states.at("y").values;
  const LingMatrix& x = b.matrices.at("x");
  c.names(compose(y, x, OperatorPair::min_min()).names(), {"0"}, "minmin");
  c.names(compose(y, x, OperatorPair::max_min()).names(), {"best"}, "maxmin");
  c.names(compose(y, x, OperatorPair::min_max()).names(), {"very_bad"}, "minmax");
  c.names(compose(y, x, OperatorPair::max_max()).names(), {"best"}, "maxmax");
}

void golden_relation(Check& c) {
  auto b = support::load_model("relation_eq.flm");
  const LingMatrix& p = b.matrices.at("P");
  const LingMatrix& q = b.matrices.at("Q");
  const LingMatrix r = flre_compose(p, q, OperatorPair::max_min());
  const std::vector<Names> want{{"good", "fair", "good", "fair", "good", "good"},
                                {"good", "fair", "good", "fair", "good", "good"},
                                {"fair", "good", "good", "good", "good", "good"},
                                {"good", "fair", "good", "fair", "good", "good"}};
  c.expect(r.rows() == 4 && r.cols() == 6, "R has the wrong shape");
  for (std::size_t i = 0; i < want.size() && c.failure.empty(); ++i)
    c.names(support::grid(r)[i], want[i], "row " + std::to_string(i + 1));
  const LingMatrix t = flre_compose(p, q, OperatorPair::min_max());
  c.expect(t.name_at(0, 0) == "bad", "T1 is " + t.name_at(0, 0));
  c.expect(t.name_at(0, 1) == "fair", "T2 is " + t.name_at(0, 1));
}

void transit_maxmax(Check& c) {
  auto b = support::load_model("transit.flm");
  FLCMModel model = b.flcm_models.at("transit").model;
  model.pair = OperatorPair::max_max();
  const HiddenPattern p = flcm_run(model, b.states.at("X"));
  c.expect(p.kind == PatternKind::FixedPoint, "no fixed point");
  c.expect(p.iterations <= 3, "took " + std::to_string(p.iterations) + " iterations");
  if (p.trace.size() < 3) {
    c.expect(false, "trace too short");
    return;
  }
  c.names(p.trace[1].names(),
          {"often", "often", "some", "very_much", "often", "some", "much", "often"}, "X1");
  c.names(p.trace[2].names(),
          {"often", "very_much", "some", "very_much", "often", "some", "very_much", "often"},
          "X2");
  c.names(p.cycle.front().names(),
          {"often", "very_much", "some", "very_much", "often", "some", "very_much", "often"},
          "fixed point");
}

void child_labour_maxmin(Check& c) {
  auto b = support::load_model("child_labour.flm");
  const FLCMModel& model = b.flcm_models.at("child_labour").model;
  const auto s = model.matrix.space();
  const HiddenPattern p = flcm_run(
      model, StateVector::initial(LingMatrix::row(s, {"+often", "0", "0", "0", "0", "0"})));
  c.expect(p.kind == PatternKind::FixedPoint, "no fixed point");
  c.names(p.cycle.front().names(), {"+often", "0", "+often", "+often", "+often", "0"},
          "fixed point");
}

void flrm_first_projection(Check& c) {
  auto b = support::load_model("employee.flm");
  const FLRMModel& model = b.flrm_models.at("employee").model;
  const StateVector& x = b.states.at("X");
  c.names(compose(x.values, model.matrix, OperatorPair::max_max()).names(),
          {"good_gain", "gain", "gain", "gain", "gain"}, "Y1");
  const FLRMResult r = flrm_run(model, x, Side::Domain);
  c.names(r.range.trace.front().names(), {"good_gain", "gain", "gain", "gain", "gain"},
          "engine Y1");
}

void oracle_equivalence(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(1234);
  std::uniform_int_distribution<std::size_t> dim(1, 4), size(3, 7);
  for (int round = 0; round < 1000 && c.failure.empty(); ++round) {
    auto s = support::numbered_chain("r", size(rng));
    const std::size_t n = dim(rng), k = dim(rng), m = dim(rng);
    const LingMatrix a = support::random_matrix(rng, s, n, k);
    const LingMatrix b = support::random_matrix(rng, s, k, m);
    const auto chain = support::chain_of(*s);
    for (auto pair : kAllPairs)
      c.expect(support::grid(compose(a, b, pair)) ==
                   oracle::compose(chain, support::grid(a), support::grid(b),
                                   pair.outer == Op::Max, pair.inner == Op::Max),
               "round " + std::to_string(round) + " " + std::string(to_string(pair)));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 5.0, "took " + std::to_string(secs) + " s");
}

void lattice_laws(Check& c) {
  std::vector<SpacePtr> spaces;
  for (const char* file : {"spaces.flm", "metrics.flm", "relation_eq.flm", "transit.flm",
                           "child_labour.flm", "grades.flm", "speed.flm", "employee.flm",
                           "polynomials.flm"}) {
    auto b = support::load_model(file);
    for (const auto& [name, s] : b.spaces) spaces.push_back(s);
  }
  for (const auto& sp : spaces) {
    const auto& s = *sp;
    const auto ts = s.terms();
    const std::string where = "space " + s.name();
    bool all_comparable = true;
    for (Term a : ts) {
      c.expect(s.meet(a, a) == a, where + ": meet idempotence");
      if (s.is_lattice()) c.expect(s.join(a, a) == a, where + ": join idempotence");
      for (Term b : ts) {
        if (s.compare(a, b) == Ordering::Incomparable) all_comparable = false;
        c.expect(s.meet(a, b) == s.meet(b, a), where + ": meet commutativity");
        c.expect(s.try_join(a, b) == s.try_join(b, a), where + ": join commutativity");
        if (!s.is_lattice()) continue;
        c.expect(s.join(a, s.meet(a, b)) == a, where + ": absorption");
        c.expect(s.meet(a, s.join(a, b)) == a, where + ": absorption");
        for (Term d : ts) {
          c.expect(s.meet(s.meet(a, b), d) == s.meet(a, s.meet(b, d)),
                   where + ": meet associativity");
          c.expect(s.join(s.join(a, b), d) == s.join(a, s.join(b, d)),
                   where + ": join associativity");
        }
      }
    }
    if (all_comparable) c.expect(s.is_chain_lattice(), where + ": comparable but not a chain");
  }
}

void degree_laws(Check& c) {
  auto b = support::load_model("polynomials.flm");
  const auto& p = b.polynomials.at("p");
  const auto& q = b.polynomials.at("q");
  c.expect(poly_op(Op::Min, p, q).degree() == Degree{2}, "Min degree");
  c.expect(poly_op(Op::Max, p, q).degree() == Degree{4}, "Max degree");

  std::mt19937 rng(2024);
  auto s = support::numbered_chain("d", 5);
  std::uniform_int_distribution<std::size_t> count(0, 4), exponent(0, 6), term(0, 4);
  auto random_poly = [&] {
    LingPolynomial r(s);
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) r.set(exponent(rng), s->at(term(rng)));
    return r;
  };
  bool strict = false;
  for (int round = 0; round < 500; ++round) {
    const LingPolynomial x = random_poly(), y = random_poly();
    const Degree lo = poly_op(Op::Min, x, y).degree();
    c.expect(poly_op(Op::Max, x, y).degree() == std::max(x.degree(), y.degree()),
             "deg Max, round " + std::to_string(round));
    c.expect(lo <= std::min(x.degree(), y.degree()), "deg Min, round " + std::to_string(round));
    if (lo < std::min(x.degree(), y.degree())) strict = true;
  }
  c.expect(strict, "no strict Min case generated");
}

void metric_conformance(Check& c) {
  auto b = support::load_model("metrics.flm");
  const MetricTable& temp = b.metrics.at("temp_metric");
  const MetricTable& mark = b.metrics.at("mark_metric");
  auto dist = [](const MetricTable& m, const std::string& x, const std::string& y) {
    const auto& s = *m.source();
    return m.distance_space()->name_of(m.distance(s.term(x), s.term(y)));
  };
  const std::vector<std::array<std::string, 3>> listed{
      {"-large", "-medium", "over_lap"},  {"-large", "-small", "very_small"},
      {"-medium", "-small", "over_lap"},  {"-large", "0", "small"},
      {"-medium", "0", "just_small"},     {"-small", "0", "very_small"},
      {"-large", "+small", "just_large"}, {"-large", "+medium", "large"},
      {"-large", "+large", "largest"},    {"-medium", "+small", "large"},
      {"-medium", "+medium", "larger"},   {"-medium", "+large", "very_large"},
      {"-small", "+small", "small"},      {"-small", "+large", "just_large"},
      {"-small", "+medium", "large"},     {"+small", "0", "very_small"},
      {"+medium", "0", "just_small"},     {"+large", "0", "small"},
      {"+small", "+medium", "over_lap"},  {"+small", "+large", "small"},
      {"+medium", "+large", "over_lap"},  {"+small", "+small", "0"},
  };
  for (const auto& [x, y, d] : listed) {
    c.expect(dist(temp, x, y) == d, "F(" + x + ", " + y + ") = " + dist(temp, x, y));
    c.expect(dist(temp, y, x) == d, "F(" + y + ", " + x + ") = " + dist(temp, y, x));
  }
  c.expect(dist(mark, "good", "bad") == "far", "F(good, bad)");
  c.expect(dist(mark, "best", "worst") == "very_far", "F(best, worst)");
  c.expect(classify_topology(temp).metric_kind == MetricKind::Overlapping,
           "temperature is not overlapping");
  c.expect(classify_topology(mark).metric_kind == MetricKind::Discrete, "marks are not discrete");
}

void parser_robustness(Check& c) {
  std::vector<std::string> sources;
  for (const auto& e : std::filesystem::directory_iterator(support::models_dir()))
    if (e.path().extension() == ".flm") sources.push_back(support::read_file(e.path().string()));
  std::sort(sources.begin(), sources.end());
  c.expect(!sources.empty(), "empty corpus");
  for (const auto& text : sources) {
    ParseResult first = parse_model_file(text);
    if (!first.ok()) {
      c.expect(false, "corpus file does not parse");
      continue;
    }
    ParseResult second = parse_model_file(serialize(*first.bundle));
    c.expect(second.ok() && equivalent(*first.bundle, *second.bundle), "round trip differs");
  }
  std::mt19937 rng(12345);
  const std::string alphabet = "abc0+-<>[](){};:,=x^#\n \t\x01\xff";
  for (int round = 0; round < 10000; ++round) {
    std::string text = sources[rng() % sources.size()];
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits && !text.empty(); ++e) {
      const std::size_t pos = rng() % text.size();
      switch (rng() % 5) {
        case 0: text[pos] = alphabet[rng() % alphabet.size()]; break;
        case 1: text.erase(pos, 1 + rng() % 8); break;
        case 2: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        case 3: text[pos] = static_cast<char>(rng() % 256); break;
        case 4: text.insert(pos, text.substr(rng() % text.size(), rng() % 40)); break;
      }
    }
    try {
      ParseResult r = parse_model_file(text);
      c.expect(r.ok() || !r.diagnostics.empty(),
               "mutation " + std::to_string(round) + " failed without diagnostics");
      for (const auto& d : r.diagnostics)
        c.expect(d.location.line >= 1 && d.location.column >= 1,
                 "mutation " + std::to_string(round) + " has a bad location");
    } catch (const std::exception& e) {
      c.expect(false, "mutation " + std::to_string(round) + " threw: " + e.what());
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"speed vector composed under all four pairs", speed_quadruple},
      {"MinMin zero rule, displayed and 200 random", zero_rule},
      {"scalar quadruple on the grade vectors", scalar_quadruple},
      {"relation equation R and MinMax T1, T2", golden_relation},
      {"transit FLCM MaxMax fixed point in <= 3 steps", transit_maxmax},
      {"child labour FLCM MaxMin fixed point", child_labour_maxmin},
      {"employee FLRM first projection", flrm_first_projection},
      {"compose equals naive oracle, 1000 pairs, < 5 s", oracle_equivalence},
      {"lattice laws and comparable implies chain", lattice_laws},
      {"polynomial degree laws", degree_laws},
      {"metric lookups and topology classes", metric_conformance},
      {"parser round trip and 10000 mutations", parser_robustness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = c.failure.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << (i + 1 < 10 ? " " : "") << i + 1 << "  "
              << criteria[i].first;
    if (!ok) std::cout << "  [" << c.failure << "]";
    std::cout << '\n';
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
