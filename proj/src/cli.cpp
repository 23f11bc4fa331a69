#include "flm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "flm/modelfile.hpp"

namespace flm {

namespace {

// Raised for anything that should end the run with exit code 1.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for bad flag values that CLI11 cannot check by itself.
struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Text, Records };

using Record = std::map<std::string, std::string>;

void emit(std::ostream& out, const Record& r) {
  bool first = true;
  for (const auto& [k, v] : r) {
    out << (first ? "" : " ") << k << '=';
    first = false;
    if (v.find_first_of(" \"") == std::string::npos) {
      out << v;
      continue;
    }
    out << '"';
    for (char c : v) out << (c == '"' ? "\\\"" : std::string(1, c));
    out << '"';
  }
  out << '\n';
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string words(const LingMatrix& row) { return join(row.names(), " "); }
std::string csv(const LingMatrix& row) { return join(row.names(), ","); }
std::string yes_no(bool b) { return b ? "yes" : "no"; }
std::string bool_text(bool b) { return b ? "true" : "false"; }

ModelBundle load(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  ParseResult r = parse_model_file(buf.str());
  for (const auto& d : r.diagnostics) err << path << ':' << format_diagnostic(d) << '\n';
  if (!r.ok()) throw Failure("'" + path + "' has errors");
  return std::move(*r.bundle);
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name,
                                        std::string_view kind) {
  auto it = m.find(name);
  if (it == m.end()) throw Failure("no " + std::string(kind) + " named '" + name + "'");
  return it->second;
}

// Picks the named entry, or the only one when no name was given.
template <class Map>
const typename Map::mapped_type& pick(const Map& m, const std::string& name,
                                      std::string_view kind) {
  if (!name.empty()) return lookup(m, name, kind);
  if (m.size() != 1)
    throw Failure("the model declares " + std::to_string(m.size()) + " " +
                  std::string(kind) + " entries; name one explicitly");
  return m.begin()->second;
}

// A matrix or state by name.
LingMatrix operand(const ModelBundle& b, const std::string& name) {
  if (auto it = b.matrices.find(name); it != b.matrices.end()) return it->second;
  if (auto it = b.states.find(name); it != b.states.end()) return it->second.values;
  throw Failure("no matrix or state named '" + name + "'");
}

// A state by name, or a literal such as "(often, 0, some)".
LingMatrix state_arg(const ModelBundle& b, const std::string& text, const SpacePtr& space) {
  if (auto it = b.states.find(text); it != b.states.end()) return it->second.values;
  if (!text.empty() && text.front() == '(') return parse_row_literal(space, text);
  throw Failure("no state named '" + text + "'");
}

std::optional<OperatorPair> pair_arg(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (auto p = parse_pair(text)) return p;
  throw Usage("unknown operator pair '" + text + "'");
}

std::size_t max_iters_arg(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  const char* env = std::getenv("FLM_MAX_ITERS");
  if (!env || !*env) return kDefaultMaxIters;
  std::size_t v = 0;
  const std::string_view s(env);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Usage("FLM_MAX_ITERS must be a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void print_grid(std::ostream& out, Format f, const LingMatrix& m) {
  if (f == Format::Text) {
    out << format_grid(m);
    return;
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.name_at(i, j));
    emit(out, {{"row", std::to_string(i + 1)}, {"values", join(row, ",")}});
  }
}

// ---- subcommands ----------------------------------------------------------

void classify_space(std::ostream& out, Format f, const ModelBundle& b,
                    const std::string& name, const std::string& partition) {
  std::vector<std::string> names;
  if (!name.empty()) {
    lookup(b.spaces, name, "space");
    names.push_back(name);
  } else {
    for (const auto& [n, s] : b.spaces) names.push_back(n);
  }
  if (!partition.empty() && names.size() != 1)
    throw Usage("--partition needs a single --space");
  for (const auto& n : names) {
    const LinguisticSpace& s = *b.spaces.at(n);
    std::optional<std::vector<std::vector<Term>>> blocks;
    if (!partition.empty()) {
      blocks.emplace();
      std::string block;
      std::stringstream ss(partition);
      while (std::getline(ss, block, ';')) {
        blocks->emplace_back();
        for (const auto& t : split_list(block))
          if (!t.empty()) blocks->back().push_back(s.term(t));
      }
    }
    const ComparabilityClass cc = s.classify_comparability(blocks);
    std::vector<std::string> maximal;
    for (Term t : s.maximal_terms()) maximal.push_back(s.name_of(t));
    const std::string greatest = s.greatest() ? s.name_of(*s.greatest()) : "none";
    if (f == Format::Records) {
      emit(out, {{"chain_lattice", bool_text(s.is_chain_lattice())},
                 {"comparability", std::string(to_string(cc.kind))},
                 {"greatest", greatest},
                 {"kind", std::string(to_string(s.kind()))},
                 {"lattice", bool_text(s.is_lattice())},
                 {"maximal", join(maximal, ",")},
                 {"space", n},
                 {"terms", std::to_string(s.size())}});
      continue;
    }
    out << "space: " << n << '\n'
        << "  kind: " << to_string(s.kind()) << '\n'
        << "  terms: " << s.size() << '\n'
        << "  chain lattice: " << yes_no(s.is_chain_lattice()) << '\n'
        << "  lattice: " << yes_no(s.is_lattice()) << '\n'
        << "  comparability: " << to_string(cc.kind) << '\n'
        << "  greatest: " << greatest << '\n'
        << "  maximal: " << join(maximal, " ") << '\n';
  }
}

void classify_topology_cmd(std::ostream& out, Format f, const ModelBundle& b,
                           const std::string& metric, const std::string& experts) {
  const MetricTable& table = lookup(b.metrics, metric, "metric");
  std::optional<ExpertCollection> graphs;
  if (!experts.empty()) graphs = b.expert_collection(experts);
  const TopologyReport r = classify_topology(table, graphs);
  std::string graph_text = "n/a";
  if (r.graph_connectivity)
    graph_text = std::string(to_string(r.graph_connectivity->kind)) + " (" +
                 std::to_string(r.graph_connectivity->connected) + "/" +
                 std::to_string(r.graph_connectivity->total) + " connected)";
  if (f == Format::Records) {
    Record rec{{"chain_connected", bool_text(r.chain_connected)},
               {"lattice_connected", bool_text(r.lattice_connected)},
               {"metric", metric},
               {"metric_kind", std::string(to_string(r.metric_kind))}};
    if (r.graph_connectivity) {
      rec["graph_connectivity"] = std::string(to_string(r.graph_connectivity->kind));
      rec["graphs_connected"] = std::to_string(r.graph_connectivity->connected);
      rec["graphs_total"] = std::to_string(r.graph_connectivity->total);
    }
    emit(out, rec);
    return;
  }
  out << "metric: " << metric << '\n'
      << "  metric kind: " << to_string(r.metric_kind) << '\n'
      << "  chain connected: " << yes_no(r.chain_connected) << '\n'
      << "  lattice connected: " << yes_no(r.lattice_connected) << '\n'
      << "  graph connectivity: " << graph_text << '\n';
}

void graph_cmd(std::ostream& out, Format f, const ModelBundle& b, const std::string& graph,
               const std::string& experts) {
  if (graph.empty() == experts.empty()) throw Usage("give exactly one of --graph, --experts");
  std::vector<std::pair<std::string, const ConceptGraph*>> gs;
  if (!graph.empty()) {
    gs.emplace_back(graph, &lookup(b.graphs, graph, "graph"));
  } else {
    for (const auto& g : lookup(b.experts, experts, "expert collection"))
      gs.emplace_back(g, &b.graphs.at(g));
  }
  for (const auto& [name, g] : gs) {
    const bool connected = is_connected(*g);
    if (f == Format::Records) {
      emit(out, {{"connected", bool_text(connected)},
                 {"directed", bool_text(g->directed())},
                 {"edges", std::to_string(g->edges().size())},
                 {"graph", name},
                 {"nodes", std::to_string(g->size())}});
      continue;
    }
    out << "graph: " << name << '\n'
        << "  nodes: " << join(g->concepts(), " ") << '\n'
        << "  edges: " << g->edges().size() << (g->directed() ? " directed" : " undirected")
        << '\n'
        << "  connected: " << yes_no(connected) << '\n';
    if (!graph.empty()) {
      out << "  adjacency:\n";
      std::istringstream grid(format_grid(graph_to_matrix(*g)));
      for (std::string line; std::getline(grid, line);) out << "    " << line << '\n';
    }
  }
  if (!experts.empty()) {
    const ExpertClass c = classify_experts(b.expert_collection(experts));
    if (f == Format::Records) {
      emit(out, {{"class", std::string(to_string(c.kind))},
                 {"connected", std::to_string(c.connected)},
                 {"experts", experts},
                 {"total", std::to_string(c.total)}});
    } else {
      out << "experts: " << experts << ": " << to_string(c.kind) << " (" << c.connected
          << "/" << c.total << " connected)\n";
    }
  }
}

void print_pattern(std::ostream& out, Format f, const HiddenPattern& p,
                   const std::string& label, const std::string& side) {
  for (std::size_t k = 0; k < p.trace.size(); ++k) {
    if (f == Format::Records) {
      Record r{{"step", std::to_string(k)}, {"values", csv(p.trace[k])}};
      if (!side.empty()) r["side"] = side;
      emit(out, r);
    } else {
      out << label << k << ": " << words(p.trace[k]) << '\n';
    }
  }
}

void print_result(std::ostream& out, Format f, const HiddenPattern& p, const std::string& side) {
  std::vector<std::string> states;
  for (const auto& s : p.cycle) states.push_back(f == Format::Text ? words(s) : csv(s));
  if (f == Format::Records) {
    Record r{{"cycle_length", std::to_string(p.cycle.size())},
             {"iterations", std::to_string(p.iterations)},
             {"pattern", std::string(to_string(p.kind))},
             {"values", join(states, "|")}};
    if (!side.empty()) r["side"] = side;
    emit(out, r);
    return;
  }
  out << to_string(p.kind) << (side.empty() ? "" : " " + side) << ": " << join(states, " | ")
      << '\n';
}

struct RunOptions {
  std::string model_name;
  std::string initial;
  std::string pair;
  std::optional<std::size_t> max_iters;
};

void run_flcm_cmd(std::ostream& out, Format f, const ModelBundle& b, const RunOptions& o) {
  FLCMModel model = pick(b.flcm_models, o.model_name, "flcm model").model;
  if (auto p = pair_arg(o.pair)) model.pair = *p;
  const std::size_t cap = max_iters_arg(o.max_iters);
  const StateVector initial =
      StateVector::initial(state_arg(b, o.initial, model.matrix.space()));
  const HiddenPattern p = flcm_run(model, initial, cap);
  print_pattern(out, f, p, "X", "");
  if (f == Format::Text) out << "iterations: " << p.iterations << '\n';
  print_result(out, f, p, "");
}

void run_flrm_cmd(std::ostream& out, Format f, const ModelBundle& b, const RunOptions& o,
                  const std::string& side_text) {
  FLRMModel model = pick(b.flrm_models, o.model_name, "flrm model").model;
  if (auto p = pair_arg(o.pair)) model.pair = *p;
  const std::size_t cap = max_iters_arg(o.max_iters);
  if (side_text != "domain" && side_text != "range")
    throw Usage("--side must be 'domain' or 'range'");
  const Side side = side_text == "domain" ? Side::Domain : Side::Range;
  const StateVector initial =
      StateVector::initial(state_arg(b, o.initial, model.matrix.space()));
  const FLRMResult r = flrm_run(model, initial, side, cap);
  if (f == Format::Records) {
    print_pattern(out, f, r.domain, "", "domain");
    print_pattern(out, f, r.range, "", "range");
  } else {
    for (std::size_t k = 0; k < r.domain.trace.size(); ++k) {
      out << "X" << k << ": " << words(r.domain.trace[k]) << '\n';
      out << "Y" << k << ": " << words(r.range.trace[k]) << '\n';
    }
    out << "iterations: " << r.domain.iterations << '\n';
  }
  print_result(out, f, r.domain, "domain");
  print_result(out, f, r.range, "range");
}

void poly_cmd(std::ostream& out, Format f, const ModelBundle& b, const std::string& p_name,
              const std::string& q_name, const std::string& op) {
  const LingPolynomial& p = lookup(b.polynomials, p_name, "polynomial");
  const LingPolynomial& q = lookup(b.polynomials, q_name, "polynomial");
  std::vector<std::pair<std::string, Op>> ops;
  if (op == "min" || op == "both") ops.emplace_back("min", Op::Min);
  if (op == "max" || op == "both") ops.emplace_back("max", Op::Max);
  if (ops.empty()) throw Usage("--op must be 'min', 'max' or 'both'");
  for (const auto& [label, o] : ops) {
    const LingPolynomial r = poly_op(o, p, q);
    if (f == Format::Records) {
      emit(out, {{"degree", to_string(r.degree())}, {"op", label}, {"poly", format_poly(r)}});
    } else {
      out << label << ": " << format_poly(r) << '\n'
          << "  degree: " << to_string(r.degree()) << '\n';
    }
  }
}

void feedforward_cmd(std::ostream& out, Format f, const ModelBundle& b,
                     const std::string& input, const std::string& layers_text,
                     const std::string& activations_text, const std::string& pair_text) {
  std::vector<LingMatrix> layers;
  for (const auto& name : split_list(layers_text)) layers.push_back(operand(b, name));
  if (layers.empty()) throw Usage("--layers is empty");
  std::vector<std::optional<Activation>> acts;
  if (!activations_text.empty()) {
    for (const auto& name : split_list(activations_text)) {
      if (name == "-" || name.empty())
        acts.emplace_back(std::nullopt);
      else
        acts.emplace_back(lookup(b.activations, name, "activation").as_function());
    }
  }
  const OperatorPair pair = pair_arg(pair_text).value_or(OperatorPair::max_min());
  const LingMatrix x = state_arg(b, input, layers.front().space());
  print_grid(out, f, feedforward_eval(layers, x, pair, acts));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linguistic fuzzy models: validate, classify and run .flm files", "flm"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output style")
      ->check(CLI::IsMember({"text", "records"}));

  std::string model_path, space, partition, metric, experts, graph, a, b_name, pair;
  std::string model_name, initial, side = "domain", p_name, q_name, op = "both";
  std::string layers, activations;
  std::optional<std::size_t> max_iters;

  auto* validate = app.add_subcommand("validate", "Parse a model file and report problems");
  validate->add_option("file", model_path, "Model file")->required();

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model_path, "Model file")->required();
  };

  auto* cspace = app.add_subcommand("classify-space", "Order properties of spaces");
  add_model(cspace);
  cspace->add_option("--space", space, "Space name (default: all)");
  cspace->add_option("--partition", partition, "Chain blocks, e.g. \"a,b;c,d\"");

  auto* ctopo = app.add_subcommand("classify-topology", "Topology of a metric");
  add_model(ctopo);
  ctopo->add_option("--metric", metric, "Metric name")->required();
  ctopo->add_option("--experts", experts, "Expert collection for graph connectivity");

  auto* comp = app.add_subcommand("compose", "Compose two matrices or states");
  add_model(comp);
  comp->add_option("--a", a, "Left operand")->required();
  comp->add_option("--b", b_name, "Right operand")->required();
  comp->add_option("--pair", pair, "Operator pair");

  auto* gcmd = app.add_subcommand("graph", "Connectivity of a graph or expert collection");
  add_model(gcmd);
  gcmd->add_option("--graph", graph, "Graph name");
  gcmd->add_option("--experts", experts, "Expert collection name");

  auto add_run = [&](CLI::App* sub, const char* model_flag) {
    add_model(sub);
    sub->add_option(model_flag, model_name, "Model name (default: the only one)");
    sub->add_option("--initial", initial, "State name or literal \"(a, b, ...)\"")
        ->required();
    sub->add_option("--pair", pair, "Override the model's operator pair");
    sub->add_option("--max-iters", max_iters, "Iteration cap (default FLM_MAX_ITERS or 1000)");
  };
  auto* flcm = app.add_subcommand("run-flcm", "Run a cognitive map to its hidden pattern");
  add_run(flcm, "--flcm");
  auto* flrm = app.add_subcommand("run-flrm", "Run a relational map to its hidden pattern");
  add_run(flrm, "--flrm");
  flrm->add_option("--side", side, "Initiating side: domain or range");

  auto* flre = app.add_subcommand("compose-flre", "Relation equation P o Q = R");
  add_model(flre);
  flre->add_option("--p", p_name, "Matrix P")->required();
  flre->add_option("--q", q_name, "Matrix Q")->required();
  flre->add_option("--pair", pair, "Operator pair");

  auto* poly = app.add_subcommand("poly", "Min/max of two polynomials");
  add_model(poly);
  poly->add_option("--p", p_name, "Polynomial p")->required();
  poly->add_option("--q", q_name, "Polynomial q")->required();
  poly->add_option("--op", op, "min, max or both");

  auto* ff = app.add_subcommand("feedforward", "Evaluate a layered network");
  add_model(ff);
  ff->add_option("--input", initial, "State name or literal")->required();
  ff->add_option("--layers", layers, "Comma-separated weight matrices")->required();
  ff->add_option("--activation", activations, "Comma-separated activations, '-' for none");
  ff->add_option("--pair", pair, "Operator pair");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Format f = format == "records" ? Format::Records : Format::Text;
  try {
    if (validate->parsed()) {
      const ModelBundle bundle = load(model_path, err);
      out << "ok: " << bundle.summary() << '\n';
      return 0;
    }
    const ModelBundle bundle = load(model_path, err);
    if (cspace->parsed()) {
      classify_space(out, f, bundle, space, partition);
    } else if (ctopo->parsed()) {
      classify_topology_cmd(out, f, bundle, metric, experts);
    } else if (comp->parsed()) {
      const OperatorPair p = pair_arg(pair).value_or(OperatorPair::max_min());
      print_grid(out, f, compose(operand(bundle, a), operand(bundle, b_name), p));
    } else if (gcmd->parsed()) {
      graph_cmd(out, f, bundle, graph, experts);
    } else if (flcm->parsed()) {
      run_flcm_cmd(out, f, bundle, {model_name, initial, pair, max_iters});
    } else if (flrm->parsed()) {
      run_flrm_cmd(out, f, bundle, {model_name, initial, pair, max_iters}, side);
    } else if (flre->parsed()) {
      const OperatorPair p = pair_arg(pair).value_or(OperatorPair::max_min());
      const LingMatrix r =
          flre_compose(operand(bundle, p_name), operand(bundle, q_name), p);
      if (f == Format::Text)
        out << "R = " << p_name << " o " << q_name << " (" << to_string(p) << ")\n";
      print_grid(out, f, r);
    } else if (poly->parsed()) {
      poly_cmd(out, f, bundle, p_name, q_name, op);
    } else if (ff->parsed()) {
      feedforward_cmd(out, f, bundle, initial, layers, activations, pair);
    }
    return 0;
  } catch (const Usage& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Failure& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace flm
