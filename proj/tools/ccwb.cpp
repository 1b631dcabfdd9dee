// ccwb: command-line front end.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccwb/constructions.hpp"
#include "ccwb/figures.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/rectangles.hpp"
#include "ccwb/report.hpp"
#include "ccwb/reproduce.hpp"
#include "ccwb/solver.hpp"
#include "ccwb/value_table.hpp"

namespace {

using namespace ccwb;
using json = nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 64;

void log_line(const std::string& s) { std::cerr << s << std::endl; }

int parse_positive(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad " + what + " '" + s + "'");
}

ValueTable builtin_table(const std::string& name) {
  if (name == "u") return build_U();
  if (name == "m") return build_M();
  if (name == "s-figure") return figure_S();
  if (name == "m-figure") return figure_M();
  if (name == "f4") return f4_table();
  if (name == "g3") return gen_g3();
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    const auto head = name.substr(0, colon);
    const int n = parse_positive(name.substr(colon + 1), "size in " + name);
    if (head == "gn") return gen_gn(n);
    if (head == "eq") return gen_named(NamedFamily::EQ, n);
    if (head == "ip") return gen_named(NamedFamily::IP, n);
    if (head == "disj") return gen_named(NamedFamily::DISJ, n);
  }
  throw UsageError("unknown builtin '" + name + "'");
}

// A path to a ccmat file, or else a builtin name.
ValueTable load_table(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_ccmat(arg);
  return builtin_table(arg);
}

unsigned default_threads() {
  if (const char* env = std::getenv("CCWB_THREADS")) {
    return static_cast<unsigned>(parse_positive(env, "CCWB_THREADS"));
  }
  return 1;
}

void emit(const Report& r, const std::string& path) {
  std::cout << to_json(r).dump(2) << '\n';
  if (!path.empty()) save_report(path, r);
}

FoolingFamily builtin_family(const std::string& name) {
  if (name == "u-horizontal") return fooling_family_horizontal();
  if (name == "u-vertical") return fooling_family_vertical();
  if (name == "m-horizontal") return on_M(fooling_family_horizontal(), name);
  if (name == "m-vertical") return on_M(fooling_family_vertical(), name);
  throw UsageError("unknown family '" + name + "'");
}

struct SolveArgs {
  std::string table;
  std::string mode = "auto";
  int max_depth = 16;
  unsigned threads = 0;
  std::size_t memo_cap = std::size_t{2} << 30;
  double time_limit = 0;
  std::string witness;
  std::string report;
};

int cmd_solve(const SolveArgs& a) {
  const auto t = load_table(a.table);
  SolveMode mode = default_mode(t);
  if (a.mode != "auto") {
    auto m = parse_solve_mode(a.mode);
    if (!m) throw UsageError("unknown mode '" + a.mode + "'");
    mode = *m;
  }
  SolveOptions o;
  o.max_depth = a.max_depth;
  o.threads = a.threads ? a.threads : default_threads();
  o.memo_cap_bytes = a.memo_cap;
  o.want_witness = !a.witness.empty();
  if (a.time_limit > 0) {
    o.deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                        std::chrono::duration<double>(a.time_limit));
  }
  o.progress = [](int d, std::uint64_t nodes) {
    log_line("depth " + std::to_string(d) + ": " + std::to_string(nodes) + " nodes");
  };
  Stopwatch sw;
  const auto res = cc_exact(t, mode, o);
  ReportEntry e;
  e.task = "solve";
  e.instance = a.table + " (" + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + ", " + to_string(mode) + ")";
  e.runtime_ms = sw.ms();
  e.value = {{"lower_bound", res.lower_bound},
             {"proven_above", res.proven_above},
             {"nodes", res.stats.nodes_expanded},
             {"memo_entries", res.stats.memo_entries},
             {"memo_hits", res.stats.memo_hits},
             {"memo_evictions", res.stats.memo_evictions}};
  if (res.status == SolveStatus::BudgetExceeded) {
    e.result = Outcome3::Budget;
    e.message = "no protocol found within budget; cc > " + std::to_string(res.proven_above);
    e.value["cc"] = nullptr;
  } else {
    e.value["cc"] = res.depth;
    if (res.witness) {
      std::ofstream os(a.witness, std::ios::binary);
      if (!os) throw Error("cannot write " + a.witness);
      os << protocol_to_json(*res.witness).dump(2) << '\n';
      e.witness = a.witness;
    }
  }
  Report r;
  r.command = "solve";
  r.entries.push_back(e);
  if (!a.report.empty()) save_report(a.report, r);
  if (res.status == SolveStatus::BudgetExceeded) {
    log_line(e.message);
    return kExitBudget;
  }
  std::cout << res.depth << '\n';
  return 0;
}

int cmd_verify_protocol(const std::string& table, const std::string& protocol, const std::string& sem_name,
                        const std::string& report) {
  const auto t = load_table(table);
  std::ifstream is(protocol, std::ios::binary);
  if (!is) throw UsageError("cannot read " + protocol);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& ex) {
    throw FormatError(std::string("bad protocol JSON: ") + ex.what());
  }
  const auto p = protocol_from_json(j);
  Semantics sem = p.leaf_kind() == LeafKind::Local ? Semantics::Local : Semantics::Global;
  if (sem_name == "global") sem = Semantics::Global;
  else if (sem_name == "local") sem = Semantics::Local;
  else if (sem_name != "auto") throw UsageError("unknown semantics '" + sem_name + "'");
  Stopwatch sw;
  const auto cx = verify_classical(p, t, sem);
  ReportEntry e;
  e.task = "verify-protocol";
  e.instance = table + " with " + protocol;
  e.runtime_ms = sw.ms();
  e.value = {{"depth", p.depth()}, {"semantics", sem == Semantics::Local ? "local" : "global"}};
  if (cx) {
    e.result = Outcome3::Fail;
    e.message = "wrong output at (" + t.row_labels()[cx->x] + ", " + t.col_labels()[cx->y] + ")";
    e.value["counterexample"] = {{"row", t.row_labels()[cx->x]},
                                 {"col", t.col_labels()[cx->y]},
                                 {"alice", cx->got_a},
                                 {"bob", cx->got_b},
                                 {"want", cx->want}};
  }
  Report r;
  r.command = "verify-protocol";
  r.entries.push_back(e);
  emit(r, report);
  return r.exit_code();
}

int cmd_fooling(const std::string& name, const std::string& report) {
  const auto f = builtin_family(name);
  const auto t = name.starts_with("m-") ? build_M() : build_U();
  Stopwatch sw;
  const auto c = verify_fooling_family(t, f);
  ReportEntry e;
  e.task = "fooling-verify";
  e.instance = name;
  e.runtime_ms = sw.ms();
  e.value = {{"rects", f.size()}, {"cells", c.cells}, {"pairs_checked", c.pairs_checked}};
  if (!c.ok()) {
    e.result = Outcome3::Fail;
    e.message = c.violation->message;
  }
  Report r;
  r.command = "fooling verify";
  r.entries.push_back(e);
  emit(r, report);
  return r.exit_code();
}

int cmd_expansion(const std::string& name, int k, int min, const std::string& report) {
  AdjacencyGraph g;
  if (name == "horizontal") g = build_adjacency(fooling_family_horizontal(), Axis::Horizontal);
  else if (name == "vertical") g = build_adjacency(fooling_family_vertical(), Axis::Vertical);
  else throw UsageError("unknown graph '" + name + "'");
  if (k < 1 || static_cast<std::size_t>(k) > g.size()) throw UsageError("k out of range");
  Stopwatch sw;
  const auto res = check_expansion(g, static_cast<std::size_t>(k), static_cast<std::size_t>(min),
                                   [](std::uint64_t done, std::uint64_t total) {
                                     log_line(std::to_string(done) + " / " + std::to_string(total) + " subsets");
                                   });
  ReportEntry e;
  e.task = "expansion";
  e.instance = name + " graph, k = " + std::to_string(k) + ", min = " + std::to_string(min);
  e.runtime_ms = sw.ms();
  e.value = {{"vertices", g.size()}, {"total", res.total}, {"covered", res.covered}, {"visited", res.visited}};
  if (!res.ok) {
    e.result = Outcome3::Fail;
    e.message = "subset with " + std::to_string(res.witness_neighbours) + " neighbours";
    e.value["witness"] = g.names(*res.witness);
    e.value["witness_neighbours"] = res.witness_neighbours;
    e.witness = "value.witness";
  }
  Report r;
  r.command = "expansion";
  r.entries.push_back(e);
  emit(r, report);
  return r.exit_code();
}

int cmd_certificate(const std::string& table, const std::string& axis_name, int threshold, const std::string& report) {
  Axis axis;
  if (axis_name == "rows") axis = Axis::Horizontal;
  else if (axis_name == "cols") axis = Axis::Vertical;
  else throw UsageError("axis must be rows or cols");
  const bool on_m = table == "m";
  if (!on_m && table != "u") throw UsageError("table must be m or u");
  const auto t = on_m ? build_M() : build_U();
  auto f = axis == Axis::Horizontal ? fooling_family_horizontal() : fooling_family_vertical();
  if (on_m) f = on_M(f, axis == Axis::Horizontal ? "m-horizontal" : "m-vertical");
  Stopwatch sw;
  const auto c = bipartition_certificate(t, f, axis, static_cast<std::size_t>(threshold));
  ReportEntry e;
  e.task = "certificate";
  e.instance = table + ", " + f.id + ", threshold " + std::to_string(threshold);
  e.runtime_ms = sw.ms();
  e.value = {{"family_ok", c.family_ok},
             {"bipartition_ok", c.bipartition_ok},
             {"bipartitions", c.bipartitions_checked},
             {"bound", c.bound ? json(*c.bound) : json(nullptr)}};
  if (!c.bound) {
    e.result = Outcome3::Fail;
    e.message = c.family_ok ? "a bipartition has both parts below the threshold" : c.family_message;
    if (c.failing_part) e.value["failing_part"] = *c.failing_part;
  }
  Report r;
  r.command = "certificate";
  r.entries.push_back(e);
  emit(r, report);
  return r.exit_code();
}

int cmd_gen(const std::string& name, const std::string& out) {
  const auto t = builtin_table(name);
  if (out.empty() || out == "-") {
    write_ccmat(std::cout, t);
  } else {
    save_ccmat(out, t);
  }
  return 0;
}

int cmd_reproduce(const std::string& scope, unsigned threads, double budget, const std::string& witness_dir,
                  const std::string& report) {
  ReproduceOptions o;
  o.threads = threads ? threads : default_threads();
  o.solve_budget_s = budget;
  o.witness_dir = witness_dir;
  o.log = log_line;
  const auto r = reproduce(scope, o);
  emit(r, report);
  for (const auto& e : r.entries) log_line(std::string(to_string(e.result)) + "  " + e.task);
  if (r.summary.contains("separation")) log_line(r.summary["separation"].get<std::string>());
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccwb: communication complexity workbench"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "exact deterministic communication complexity of a table");
  solve->add_option("table", sa.table, "ccmat file or builtin name")->required();
  solve->add_option("--mode", sa.mode, "total | partial-global | partial-local | auto");
  solve->add_option("--max-depth", sa.max_depth, "give up above this depth")->check(CLI::Range(0, 64));
  solve->add_option("--threads", sa.threads, "worker threads (default: CCWB_THREADS or 1)");
  solve->add_option("--memo-cap", sa.memo_cap, "memo size cap in bytes");
  solve->add_option("--time-limit", sa.time_limit, "seconds before giving up (0 = none)");
  solve->add_option("--witness", sa.witness, "write the optimal protocol as JSON");
  solve->add_option("--report", sa.report, "write a JSON report");

  std::string vp_table, vp_protocol, vp_sem = "auto", vp_report;
  auto* vp = app.add_subcommand("verify-protocol", "check a classical protocol against a table");
  vp->add_option("--table", vp_table, "ccmat file or builtin name")->required();
  vp->add_option("--protocol", vp_protocol, "protocol JSON")->required();
  vp->add_option("--semantics", vp_sem, "global | local | auto");
  vp->add_option("--report", vp_report, "also write the JSON report here");

  std::string fam_name, fam_report;
  auto* fooling = app.add_subcommand("fooling", "fooling-rectangle families");
  fooling->require_subcommand(1);
  auto* fverify = fooling->add_subcommand("verify", "verify a builtin family");
  fverify->add_option("--builtin", fam_name, "m-horizontal | m-vertical | u-horizontal | u-vertical")->required();
  fverify->add_option("--report", fam_report, "also write the JSON report here");

  std::string ex_name, ex_report;
  int ex_k = 0, ex_min = 0;
  auto* expansion = app.add_subcommand("expansion", "neighbourhood size of every k-subset of an adjacency graph");
  expansion->add_option("--builtin", ex_name, "horizontal | vertical")->required();
  expansion->add_option("--k", ex_k, "subset size")->required();
  expansion->add_option("--min", ex_min, "required neighbourhood size")->required();
  expansion->add_option("--report", ex_report, "also write the JSON report here");

  std::string ce_table = "m", ce_axis, ce_report;
  int ce_threshold = 17;
  auto* certificate = app.add_subcommand("certificate", "bipartition lower-bound certificate");
  certificate->add_option("--table", ce_table, "m | u");
  certificate->add_option("--axis", ce_axis, "rows | cols")->required();
  certificate->add_option("--threshold", ce_threshold, "rects one side must meet")->check(CLI::Range(1, 64));
  certificate->add_option("--report", ce_report, "also write the JSON report here");

  std::string gen_name, gen_out;
  auto* gen = app.add_subcommand("gen", "write a builtin table as ccmat");
  gen->add_option("--builtin", gen_name, "u | m | s-figure | m-figure | f4 | g3 | gn:N | eq:N | ip:N | disj:N")
      ->required();
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  std::string rp_scope, rp_witness_dir, rp_report;
  unsigned rp_threads = 0;
  double rp_budget = 1800;
  auto* repro = app.add_subcommand("reproduce", "run every check in a scope");
  repro->add_option("scope", rp_scope, "all | section-3 | section-4 | section-5")->required();
  repro->add_option("--threads", rp_threads, "worker threads for the solver");
  repro->add_option("--budget", rp_budget, "seconds allowed for each solver run");
  repro->add_option("--witness-dir", rp_witness_dir, "write solver witnesses here");
  repro->add_option("--report", rp_report, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(sa);
    if (*vp) return cmd_verify_protocol(vp_table, vp_protocol, vp_sem, vp_report);
    if (*fverify) return cmd_fooling(fam_name, fam_report);
    if (*expansion) return cmd_expansion(ex_name, ex_k, ex_min, ex_report);
    if (*certificate) return cmd_certificate(ce_table, ce_axis, ce_threshold, ce_report);
    if (*gen) return cmd_gen(gen_name, gen_out);
    if (*repro) return cmd_reproduce(rp_scope, rp_threads, rp_budget, rp_witness_dir, rp_report);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
