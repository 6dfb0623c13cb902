#pragma once

// Command-line frontend. run() never exits the process, so it can be driven from tests.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/fcig_engine.hpp>
#include <fuzzy_kernels/flig_engine.hpp>
#include <fuzzy_kernels/fuzzy_model.hpp>
#include <fuzzy_kernels/instance_gen.hpp>
#include <fuzzy_kernels/instance_io.hpp>
#include <fuzzy_kernels/oracle.hpp>
#include <fuzzy_kernels/query.hpp>
#include <fuzzy_kernels/sat_cograph.hpp>
#include <fuzzy_kernels/threshold.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fkernels {

using namespace fuzzy_kernels;

enum ExitCode { Ok = 0, NoResult = 1, InputError = 2 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance load(const std::string& path) {
  try {
    return parse_instance_text(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + std::string(e.what()).substr(std::string(to_string(e.kind())).size() + 2));
  }
}

// Whitespace-separated vertex ids or names; `#` comments.
inline VertexSet read_vertex_set(const Instance& inst, const std::string& path) {
  std::istringstream in(read_file(path));
  VertexSet s = inst.graph.empty_set();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(fuzzy_kernels::detail::strip_comment(line));
    for (std::string tok; ls >> tok;) {
      auto v = inst.lookup(tok);
      if (!v) throw Error(ErrorKind::Parse, path + ": line " + std::to_string(line_no) + ": unknown vertex '" + tok + "'");
      s.insert(*v);
    }
  }
  return s;
}

// Lines `<vertex> <rational>`; unlisted vertices weigh 0.
inline std::vector<Rational> read_weights(const Instance& inst, const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<Rational> w(static_cast<std::size_t>(inst.graph.order()), Rational(0));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(fuzzy_kernels::detail::strip_comment(line));
    std::string v_tok, w_tok, extra;
    if (!(ls >> v_tok)) continue;
    const std::string where = path + ": line " + std::to_string(line_no) + ": ";
    if (!(ls >> w_tok) || (ls >> extra)) throw Error(ErrorKind::Parse, where + "expected '<vertex> <weight>'");
    auto v = inst.lookup(v_tok);
    if (!v) throw Error(ErrorKind::Parse, where + "unknown vertex '" + v_tok + "'");
    auto r = parse_rational(w_tok);
    if (!r) throw Error(ErrorKind::Parse, where + "bad rational '" + w_tok + "'");
    w[static_cast<std::size_t>(*v)] = *r;
  }
  return w;
}

inline std::string format_set(const Instance& inst, const VertexSet& k, bool machine) {
  std::string s;
  for (Vertex v : k.members()) {
    if (!s.empty()) s += machine ? "," : " ";
    s += machine ? std::to_string(v) : inst.label(v);
  }
  return machine ? s : "{" + s + "}";
}

struct QueryFlags {
  std::string require, within, weights, target;
  std::optional<int> size;

  void attach(CLI::App* cmd) {
    cmd->add_option("--require", require, "file of vertices every kernel must contain");
    cmd->add_option("--within", within, "file of vertices kernels must stay inside");
    cmd->add_option("--weights", weights, "file of '<vertex> <p/q>' lines");
    cmd->add_option("--target", target, "count only kernels of this total weight");
    cmd->add_option("--size", size, "count only kernels of this size");
  }

  KernelQuery build(const Instance& inst) const {
    KernelQuery q;
    if (!require.empty()) q.lower = read_vertex_set(inst, require);
    if (!within.empty()) q.upper = read_vertex_set(inst, within);
    if (!weights.empty()) q.weights = read_weights(inst, weights);
    if (!target.empty()) {
      auto t = parse_rational(target);
      if (!t) throw Error(ErrorKind::Parse, "bad --target '" + target + "'");
      if (!q.weights) q.weights = std::vector<Rational>(static_cast<std::size_t>(inst.graph.order()), Rational(0));
      q.target = *t;
    }
    q.size = size;
    return q;
  }
};

inline const FuzzyModel& require_model(const Instance& inst, const std::string& path) {
  if (!inst.model) throw Error(ErrorKind::MissingPosition, path + " has no model; use 'oracle' for model-free instances");
  return *inst.model;
}

inline void print_report(std::ostream& out, const Instance& inst, const CountReport& r, bool machine,
                         bool show_witness) {
  if (machine) {
    out << "total=" << r.total << "\n";
    for (const auto& [k, c] : r.by_size) out << "size." << k << "=" << c << "\n";
    if (r.by_weight)
      for (const auto& [w, c] : *r.by_weight) out << "weight." << to_string(w) << "=" << c << "\n";
    if (show_witness && r.witness) out << "witness=" << format_set(inst, *r.witness, true) << "\n";
    return;
  }
  out << "kernels: " << r.total << "\n";
  if (!r.by_size.empty()) {
    out << "by size:\n";
    for (const auto& [k, c] : r.by_size) out << "  " << k << ": " << c << "\n";
  }
  if (r.by_weight && !r.by_weight->empty()) {
    out << "by weight:\n";
    for (const auto& [w, c] : *r.by_weight) out << "  " << to_string(w) << ": " << c << "\n";
  }
  if (show_witness && r.witness) out << "witness: " << format_set(inst, *r.witness, false) << "\n";
}

inline void print_sets(std::ostream& out, const Instance& inst, const std::vector<VertexSet>& sets, bool machine) {
  if (machine) {
    out << "count=" << sets.size() << "\n";
    for (std::size_t i = 0; i < sets.size(); ++i) out << "kernel." << i << "=" << format_set(inst, sets[i], true) << "\n";
    return;
  }
  for (const auto& k : sets) out << format_set(inst, k, false) << "\n";
}

inline OrientationMix parse_mix(const std::string& text) {
  OrientationMix mix;
  if (text.empty()) return mix;
  std::vector<double> p;
  std::istringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      p.push_back(std::stod(part));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, "bad --mix '" + text + "'");
    }
  }
  if (p.size() != 3) throw Error(ErrorKind::Parse, "--mix takes three comma-separated probabilities");
  mix = {p[0], p[1], p[2]};
  mix.check();
  return mix;
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Kernel counting and enumeration for fuzzy circular interval digraphs", "fkernels"};
  app.require_subcommand(1);
  bool machine = false;
  app.add_flag("--machine", machine, "key=value output");

  std::string file;
  QueryFlags qf;
  std::size_t limit = 1000;
  bool no_reuse = false;

  auto* validate = app.add_subcommand("validate", "check a model against the axioms");
  validate->add_option("file", file)->required();

  auto* count = app.add_subcommand("count", "count kernels using the model");
  count->add_option("file", file)->required();
  count->add_flag("--no-reuse", no_reuse, "build one part per pair instead of one per left vertex");
  count->add_flag("--reuse-parts", [&](std::int64_t) { no_reuse = false; }, "build one part per left vertex (default)");
  qf.attach(count);

  auto* find = app.add_subcommand("find", "print one kernel, exit 1 if none");
  find->add_option("file", file)->required();
  qf.attach(find);

  auto* enumerate = app.add_subcommand("enumerate", "list kernels in lexicographic order");
  enumerate->add_option("file", file)->required();
  enumerate->add_option("--limit", limit, "stop after this many");
  qf.attach(enumerate);

  auto* size_dist = app.add_subcommand("size-dist", "kernel counts by size");
  size_dist->add_option("file", file)->required();

  auto* mis = app.add_subcommand("mis-count", "maximal independent sets by size (bidirectional digraphs)");
  mis->add_option("file", file)->required();

  std::string action;
  auto* threshold = app.add_subcommand("threshold", "kernels of an oriented threshold digraph");
  threshold->add_option("action", action)->required()->check(CLI::IsMember({"count", "find", "enum"}));
  threshold->add_option("file", file)->required();

  std::string output;
  auto* reduce = app.add_subcommand("reduce-sat", "compile a DIMACS CNF into an oriented cograph");
  reduce->add_option("dimacs", file)->required();
  reduce->add_option("-o,--output", output, "instance file to write (stdout if omitted)");

  std::string kind;
  int n = 10, clauses = 0, max_len = 3, intervals = 0;
  std::uint64_t seed = 1;
  bool injective = false;
  std::string mix_text;
  double join_chance = 0.5;
  auto* gen = app.add_subcommand("gen", "write a seeded random instance");
  gen->add_option("kind", kind)->required()->check(CLI::IsMember({"flig", "fcig", "threshold", "cnf"}));
  gen->add_option("--n", n, "vertices (variables for cnf)");
  gen->add_option("--seed", seed);
  gen->add_option("--clauses", clauses, "clauses for cnf (default n)");
  gen->add_option("--max-len", max_len, "longest clause for cnf");
  gen->add_option("--intervals", intervals, "interval target for flig/fcig (0 = random)");
  gen->add_flag("--injective", injective, "distinct positions");
  gen->add_option("--mix", mix_text, "orientation probabilities fwd,bwd,bi");
  gen->add_option("--join-chance", join_chance, "join probability for threshold");
  gen->add_option("-o,--output", output);

  auto* oracle_cmd = app.add_subcommand("oracle", "brute force, model-free (small instances)");
  oracle_cmd->add_option("action", action)->required()->check(CLI::IsMember({"count", "enum"}));
  oracle_cmd->add_option("file", file)->required();
  oracle_cmd->add_option("--limit", limit);
  qf.attach(oracle_cmd);

  std::vector<std::string> members;
  auto* check = app.add_subcommand("check", "exit 0 iff the given vertices form a kernel");
  check->add_option("file", file)->required();
  check->add_option("vertices", members, "ids or names");

  for (auto* sub : app.get_subcommands({})) sub->add_flag("--machine", machine, "key=value output");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : InputError;
  }

  try {
    if (validate->parsed()) {
      const Instance inst = load(file);
      const FuzzyModel& m = require_model(inst, file);
      const auto report = validate_model(inst.graph, m);
      static const char* names[] = {"well-formed", "axiom 1", "axiom 2", "axiom 3", "axiom 4"};
      for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const auto& c = report.checks[i];
        if (machine) out << "check." << i << "=" << (c ? "fail" : "ok") << "\n";
        else out << names[i] << ": " << (c ? "FAIL (" + c->message + ")" : std::string("ok")) << "\n";
      }
      if (machine) {
        out << "fibre-cliques=" << report.fibres_are_cliques << "\nfew-intervals=" << report.few_intervals
            << "\ncovers-circle=" << report.covers_circle << "\nvalid=" << report.valid() << "\n";
      } else {
        out << "fibres are cliques: " << (report.fibres_are_cliques ? "yes" : "no") << "\n";
        out << "intervals <= vertices: " << (report.few_intervals ? "yes" : "no") << "\n";
        if (m.flavor == Flavor::Circular) out << "arcs cover the circle: " << (report.covers_circle ? "yes" : "no") << "\n";
        out << (report.valid() ? "valid" : "invalid") << (report.nice() ? ", nice" : "") << "\n";
      }
      return report.valid() ? Ok : NoResult;
    }
    if (count->parsed() || size_dist->parsed()) {
      const Instance inst = load(file);
      const KernelQuery q = count->parsed() ? qf.build(inst) : KernelQuery{};
      const auto r = count_kernels(inst.graph, require_model(inst, file), q, FcigOptions{!no_reuse, true, false});
      print_report(out, inst, r, machine, false);
      return Ok;
    }
    if (find->parsed()) {
      const Instance inst = load(file);
      const auto r = count_kernels(inst.graph, require_model(inst, file), qf.build(inst), FcigOptions{true, false, true});
      if (!r.witness) {
        out << (machine ? "found=0\n" : "no kernel\n");
        return NoResult;
      }
      out << (machine ? "kernel=" : "") << format_set(inst, *r.witness, machine) << "\n";
      return Ok;
    }
    if (enumerate->parsed()) {
      const Instance inst = load(file);
      print_sets(out, inst, enumerate_kernels(inst.graph, require_model(inst, file), qf.build(inst), limit), machine);
      return Ok;
    }
    if (mis->parsed()) {
      const Instance inst = load(file);
      print_report(out, inst, mis_counts(inst.graph, require_model(inst, file)), machine, false);
      return Ok;
    }
    if (threshold->parsed()) {
      const Instance inst = load(file);
      const auto seq = threshold_sequence(inst.graph);
      if (action == "count") {
        const BigInt c = threshold_kernel_count(inst.graph, seq);
        out << (machine ? "total=" : "kernels: ") << c << "\n";
        return Ok;
      }
      if (action == "find") {
        const auto k = threshold_kernel_find(inst.graph, seq);
        if (!k) {
          out << (machine ? "found=0\n" : "no kernel\n");
          return NoResult;
        }
        out << (machine ? "kernel=" : "") << format_set(inst, *k, machine) << "\n";
        return Ok;
      }
      print_sets(out, inst, threshold_kernel_enumerate(inst.graph, seq), machine);
      return Ok;
    }
    if (reduce->parsed()) {
      std::istringstream in(read_file(file));
      const CnfFormula phi = parse_dimacs(in);
      const auto red = sat_to_cograph(phi);
      Instance inst;
      inst.graph = red.graph;
      for (Vertex v = 0; v < red.graph.order(); ++v) inst.names.push_back(red.roles.describe(v));
      write_output(output, serialize_instance(inst), out);
      return Ok;
    }
    if (gen->parsed()) {
      const OrientationMix mix = parse_mix(mix_text);
      if (kind == "cnf") {
        write_output(output, to_dimacs(gen_cnf(n, clauses > 0 ? clauses : n, max_len, seed)), out);
        return Ok;
      }
      Instance inst;
      if (kind == "threshold") {
        inst.graph = gen_threshold(n, mix, seed, join_chance).graph;
      } else {
        FuzzyGenOptions opts;
        opts.intervals = intervals;
        auto fi = gen_fuzzy(n, kind == "flig" ? Flavor::Linear : Flavor::Circular, injective, mix, seed, opts);
        inst.graph = std::move(fi.graph);
        inst.model = nicify(inst.graph, fi.model).model;
      }
      write_output(output, serialize_instance(inst), out);
      return Ok;
    }
    if (oracle_cmd->parsed()) {
      const Instance inst = load(file);
      const KernelQuery q = qf.build(inst);
      if (action == "count") {
        print_report(out, inst, oracle::brute_force_report(inst.graph, q), machine, false);
      } else {
        auto ks = oracle::brute_force_query_kernels(inst.graph, q);
        sort_lexicographically(ks);
        if (ks.size() > limit) ks.resize(limit);
        print_sets(out, inst, ks, machine);
      }
      return Ok;
    }
    if (check->parsed()) {
      const Instance inst = load(file);
      VertexSet k = inst.graph.empty_set();
      for (const auto& tok : members) {
        // Accept "{a b c}" as printed by find.
        std::string t = tok;
        t.erase(std::remove_if(t.begin(), t.end(), [](char ch) { return ch == '{' || ch == '}' || ch == ','; }), t.end());
        if (t.empty()) continue;
        auto v = inst.lookup(t);
        if (!v) throw Error(ErrorKind::Parse, "unknown vertex '" + t + "'");
        k.insert(*v);
      }
      const bool indep = is_independent(inst.graph, k);
      const bool absorb = absorbs(inst.graph, k, inst.graph.all());
      if (machine) out << "independent=" << indep << "\nabsorbing=" << absorb << "\nkernel=" << (indep && absorb) << "\n";
      else out << (indep && absorb ? "kernel" : !indep ? "not a kernel: not independent" : "not a kernel: not absorbing") << "\n";
      return indep && absorb ? Ok : NoResult;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return InputError;
  }
  return InputError;
}

}  // namespace fkernels
