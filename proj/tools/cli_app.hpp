#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "laman/enumeration.hpp"
#include "laman/io.hpp"
#include "laman/laman_check.hpp"
#include "laman/laman_number.hpp"
#include "laman/numeric_oracle.hpp"

namespace laman::cli {

using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kInputError = 2,
  kOverflow = 3,
  kInternal = 4,
};

struct RunConfig {
  std::string command;
  std::string input = "-";
  std::string format = "text";
  std::string input_format = "auto";
  unsigned threads = 1;
  bool bigraph = false;
  bool no_reductions = false;
  std::optional<EdgeId> pivot;
  std::size_t n = 0;
  bool with_lam = false;
  bool force = false;
  std::uint64_t restarts = 20000;
  double tol = 1e-10;
  std::optional<std::uint64_t> expected;
};

inline unsigned default_threads() {
  if (const char* env = std::getenv("LAMAN_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InputError(std::string("LAMAN_THREADS must be a positive integer, got \"") + env + "\"");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

inline std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::vector<io::NamedGraph> parse_graphs(const std::string& text, const std::string& format) {
  bool g6 = format == "graph6" || (format == "auto" && io::looks_like_graph6(text));
  if (!g6) return {io::parse_edge_list(text)};
  std::istringstream in(text);
  std::vector<io::NamedGraph> out;
  for (auto& g : io::read_graph6(in)) out.push_back({std::move(g), {}});
  return out;
}

inline json edge_list_json(const MultiGraph& g, const std::vector<std::string>& names = {}) {
  auto name = [&](VertexId v) { return v < names.size() ? names[v] : std::to_string(v); };
  json edges = json::array();
  for (const auto& [id, ep] : g.edges()) edges.push_back({name(ep.first), name(ep.second)});
  return edges;
}

inline json stats_json(const LamStats& s) {
  return {{"nodes", s.nodes}, {"memo_hits", s.memo_hits}, {"reductions", s.reductions},
          {"pairs", s.pairs}, {"seconds", s.seconds}};
}

inline void print_stats(std::ostream& out, const LamStats& s) {
  out << "nodes " << s.nodes << " memo_hits " << s.memo_hits << " reductions " << s.reductions << " pairs "
      << s.pairs << " seconds " << s.seconds << '\n';
}

// One JSON document: a flat object for a single input, a result list otherwise.
inline json wrap(std::vector<json> results) {
  if (results.size() == 1) {
    json j = std::move(results.front());
    j["schema"] = 1;
    return j;
  }
  return {{"schema", 1}, {"results", std::move(results)}};
}

class Runner {
public:
  Runner(const RunConfig& cfg, std::istream& in, std::ostream& out) : cfg_(cfg), in_(in), out_(out) {}

  int run() {
    const std::string& c = cfg_.command;
    if (c == "check") return check();
    if (c == "lam") return lam();
    if (c == "henneberg") return henneberg();
    if (c == "enumerate") return enumerate();
    if (c == "extremal") return extremal();
    if (c == "verify") return verify();
    throw InputError("unknown command " + c);
  }

private:
  bool json_out() const { return cfg_.format == "json"; }

  LamOptions lam_options() const {
    LamOptions o;
    o.reductions = !cfg_.no_reductions;
    o.threads = cfg_.threads;
    return o;
  }

  std::vector<io::NamedGraph> graphs() { return parse_graphs(slurp(cfg_.input, in_), cfg_.input_format); }

  io::NamedBigraph bigraph() {
    if (cfg_.input_format == "graph6") throw InputError("bigraph input must be an edge list");
    return io::parse_bigraph(slurp(cfg_.input, in_));
  }

  void emit(std::vector<json> results) {
    if (json_out()) out_ << wrap(std::move(results)).dump(2) << '\n';
  }

  int check() {
    std::vector<json> results;
    for (const auto& ng : graphs()) {
      LamanReport r = check_laman(ng.graph);
      std::vector<std::string> witness;
      for (VertexId v : r.witness) witness.push_back(ng.name(v));
      if (json_out()) {
        json j = {{"laman", r.laman}};
        if (!r.laman) j["violated"] = r.violated;
        if (!witness.empty()) j["witness"] = witness;
        results.push_back(j);
      } else if (r.laman) {
        out_ << "laman\n";
      } else {
        out_ << "not-laman: condition \"" << r.violated << "\" violated";
        if (!witness.empty()) {
          out_ << "; witness";
          for (const auto& w : witness) out_ << ' ' << w;
        }
        out_ << '\n';
      }
    }
    emit(std::move(results));
    return kOk;
  }

  int lam() {
    std::vector<json> results;
    auto report = [&](const LamResult& r) {
      if (json_out()) {
        results.push_back({{"lam", r.value.value()}, {"stats", stats_json(r.stats)}});
      } else {
        out_ << r.value << '\n';
        print_stats(out_, r.stats);
      }
    };
    if (cfg_.bigraph) {
      io::NamedBigraph nb = bigraph();
      check_pivot(nb.bigraph.biedge_count());
      report(compute_lam(nb.bigraph, memo_, lam_options(), cfg_.pivot));
    } else {
      for (const auto& ng : graphs()) {
        check_pivot(ng.graph.edge_count());
        report(compute_lam_graph(ng.graph, memo_, lam_options(), cfg_.pivot));
      }
    }
    emit(std::move(results));
    return kOk;
  }

  int henneberg() {
    std::vector<json> results;
    int status = kOk;
    for (const auto& ng : graphs()) {
      auto seq = henneberg_sequence(ng.graph);
      if (!seq) {
        status = kNegative;
        LamanReport r = check_laman(ng.graph);
        if (json_out()) results.push_back({{"laman", false}, {"violated", r.violated}});
        else out_ << "not-laman: condition \"" << r.violated << "\" violated\n";
        continue;
      }
      if (json_out()) {
        json steps = json::array();
        for (const auto& s : seq->steps) {
          json j = {{"type", s.kind == HennebergStep::Kind::I ? "I" : "II"},
                    {"u", ng.name(s.u)},
                    {"v", ng.name(s.v)},
                    {"t", ng.name(s.t)}};
          if (s.kind == HennebergStep::Kind::II) j["w"] = ng.name(s.w);
          steps.push_back(j);
        }
        results.push_back({{"laman", true}, {"base", {ng.name(seq->base_u), ng.name(seq->base_v)}}, {"steps", steps}});
      } else {
        out_ << "base " << ng.name(seq->base_u) << ' ' << ng.name(seq->base_v) << '\n';
        for (const auto& s : seq->steps) {
          if (s.kind == HennebergStep::Kind::I)
            out_ << "I " << ng.name(s.u) << ' ' << ng.name(s.v) << " -> " << ng.name(s.t) << '\n';
          else
            out_ << "II " << ng.name(s.u) << ' ' << ng.name(s.v) << ' ' << ng.name(s.w) << " -> " << ng.name(s.t)
                 << '\n';
        }
      }
    }
    emit(std::move(results));
    return status;
  }

  EnumerationOptions enum_options() const {
    if (cfg_.n == 0) throw InputError("--n is required");
    EnumerationOptions o;
    o.force = cfg_.force;
    o.threads = cfg_.threads;
    return o;
  }

  // graph6 lines in text mode, JSON lines {schema, n, graph6, edges, lam} otherwise.
  int enumerate() {
    EnumerationOptions eo = enum_options();
    LamOptions lo = lam_options();
    lo.threads = 1;
    std::size_t count = enumerate_laman(
        cfg_.n,
        [&](const MultiGraph& g) {
          std::string g6 = io::to_graph6(g);
          std::optional<LamValue> value;
          if (cfg_.with_lam) value = compute_lam(duplicate(g), memo_, lo).value;
          if (json_out()) {
            json j = {{"schema", 1}, {"n", cfg_.n}, {"graph6", g6}, {"edges", edge_list_json(g)}};
            if (value) j["lam"] = value->value();
            out_ << j.dump() << '\n';
          } else {
            out_ << g6;
            if (value) out_ << ' ' << *value;
            out_ << '\n';
          }
        },
        eo);
    if (!json_out()) out_ << "# " << count << " Laman graphs on " << cfg_.n << " vertices\n";
    return kOk;
  }

  int extremal() {
    EnumerationOptions eo = enum_options();
    LamOptions lo = lam_options();
    ExtremalResult r = extremal_laman(cfg_.n, eo, lo);
    if (json_out()) {
      out_ << json{{"schema", 1},
                   {"n", r.n},
                   {"graphs", r.graphs},
                   {"min", r.min.value()},
                   {"max", r.max.value()},
                   {"argmin", edge_list_json(r.argmin)},
                   {"argmax", edge_list_json(r.argmax)},
                   {"stats", stats_json(r.stats)}}
                  .dump(2)
           << '\n';
      return kOk;
    }
    out_ << "n " << r.n << " graphs " << r.graphs << '\n';
    out_ << "min " << r.min << " max " << r.max << '\n';
    out_ << "# argmin (" << io::to_graph6(r.argmin) << ")\n";
    io::write_edge_list(out_, r.argmin);
    out_ << "# argmax (" << io::to_graph6(r.argmax) << ")\n";
    io::write_edge_list(out_, r.argmax);
    print_stats(out_, r.stats);
    return kOk;
  }

  int verify() {
    std::vector<Bigraph> inputs;
    if (cfg_.bigraph) {
      inputs.push_back(bigraph().bigraph);
    } else {
      for (const auto& ng : graphs()) {
        LamanReport r = check_laman(ng.graph);
        if (!r) throw InputError("not a Laman graph: condition \"" + r.violated + "\" violated");
        inputs.push_back(duplicate(ng.graph));
      }
    }
    oracle::VerifySettings vs;
    vs.budget = cfg_.restarts;
    vs.initial_restarts = std::min<std::uint64_t>(100, cfg_.restarts);
    vs.solver.tol = cfg_.tol;
    vs.solver.threads = cfg_.threads;
    vs.pivot = cfg_.pivot;
    std::vector<json> results;
    int status = kOk;
    for (const Bigraph& b : inputs) {
      check_pivot(b.biedge_count());
      LamValue expected = cfg_.expected ? LamValue(*cfg_.expected) : compute_lam(b, memo_, lam_options()).value;
      oracle::VerifyReport rep = oracle::verify(b, expected, vs);
      if (rep.status != oracle::VerifyStatus::Agree) status = kNegative;
      if (json_out()) {
        results.push_back({{"expected", rep.expected},
                           {"counted", rep.counted},
                           {"status", oracle::to_string(rep.status)},
                           {"seeds", rep.seeds},
                           {"counts", rep.counts},
                           {"restarts", rep.starts},
                           {"residual", rep.residual}});
      } else {
        out_ << oracle::to_string(rep.status) << ": expected " << rep.expected << " counted " << rep.counted
             << " (per seed";
        for (std::size_t i = 0; i < rep.seeds.size(); ++i)
          out_ << ' ' << rep.seeds[i] << ':' << rep.counts[i] << '/' << rep.starts[i];
        out_ << ") residual " << rep.residual << '\n';
      }
    }
    emit(std::move(results));
    return status;
  }

  // Edge k of an input file has id k, so a pivot must lie below the edge count.
  void check_pivot(std::size_t edges) const {
    if (cfg_.pivot && edges > 0 && *cfg_.pivot >= edges)
      throw InputError("--pivot " + std::to_string(*cfg_.pivot) + " is not an edge index (0.." +
                       std::to_string(edges - 1) + ")");
  }

  const RunConfig& cfg_;
  std::istream& in_;
  std::ostream& out_;
  MemoTable memo_;
};

} // namespace detail

/// Parses argv-style arguments (without the program name) and runs the command.
/// Returns the process exit status.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Laman numbers of minimally rigid graphs", "laman"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<unsigned> threads;
  std::optional<EdgeId> pivot;
  std::optional<std::uint64_t> expected;

  auto common = [&](CLI::App* sub, bool reads_input) {
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--threads", threads, "worker threads (default: LAMAN_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    if (reads_input) {
      sub->add_option("input", cfg.input, "input file, '-' for standard input");
      sub->add_option("--input-format", cfg.input_format, "input format")
          ->check(CLI::IsMember({"edge-list", "graph6", "auto"}));
    }
  };

  auto* check = app.add_subcommand("check", "test the Laman property");
  common(check, true);

  auto* lam = app.add_subcommand("lam", "compute the Laman number");
  common(lam, true);
  lam->add_flag("--bigraph", cfg.bigraph, "input is two edge lists separated by ---");
  lam->add_flag("--no-reductions", cfg.no_reductions, "run the bare recursion");
  lam->add_option("--pivot", pivot, "pivot edge index (0-based, input order)");

  auto* henneberg = app.add_subcommand("henneberg", "print a Henneberg construction");
  common(henneberg, true);

  auto* enumerate = app.add_subcommand("enumerate", "list Laman graphs on n vertices (graph6)");
  common(enumerate, false);
  enumerate->add_option("--n", cfg.n, "number of vertices")->required();
  enumerate->add_flag("--with-lam", cfg.with_lam, "also print each Laman number");
  enumerate->add_flag("--force", cfg.force, "allow n above the default cap");
  enumerate->add_flag("--no-reductions", cfg.no_reductions, "run the bare recursion");

  auto* extremal = app.add_subcommand("extremal", "minimum and maximum Laman number on n vertices");
  common(extremal, false);
  extremal->add_option("--n", cfg.n, "number of vertices")->required();
  extremal->add_flag("--force", cfg.force, "allow n above the default cap");
  extremal->add_flag("--no-reductions", cfg.no_reductions, "run the bare recursion");

  auto* verify = app.add_subcommand("verify", "compare the Laman number with a numerical solution count");
  common(verify, true);
  verify->add_flag("--bigraph", cfg.bigraph, "input is two edge lists separated by ---");
  verify->add_option("--restarts", cfg.restarts, "restart budget per seed")->check(CLI::PositiveNumber);
  verify->add_option("--tol", cfg.tol, "Newton acceptance tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--pivot", pivot, "normalising edge index");
  verify->add_option("--expected", expected, "expected count (default: computed)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    cfg.threads = threads ? *threads : default_threads();
    cfg.pivot = pivot;
    cfg.expected = expected;
    detail::Runner runner(cfg, in, out);
    return runner.run();
  } catch (const OverflowError& e) {
    err << "error: overflow: " << e.what() << '\n';
    return kOverflow;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

} // namespace laman::cli
