#pragma once

// One-shot reproduction of every check, grouped by scope.

#include <bit>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccwb/constructions.hpp"
#include "ccwb/figures.hpp"
#include "ccwb/half_duplex.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/rectangles.hpp"
#include "ccwb/report.hpp"
#include "ccwb/solver.hpp"
#include "ccwb/value_table.hpp"

namespace ccwb {

inline constexpr const char* kSeparation = "half-duplex ≤ 5 < 6 ≤ classical";

struct ReproduceOptions {
  unsigned threads = 1;
  double solve_budget_s = 1800;
  std::string witness_dir;  // protocol witnesses are written here when set
  std::function<void(const std::string&)> log;
};

namespace detail {

using json = nlohmann::json;

inline ReportEntry entry(std::string task, std::string instance) {
  ReportEntry e;
  e.task = std::move(task);
  e.instance = std::move(instance);
  return e;
}

inline void expect(ReportEntry& e, bool ok, const std::string& why) {
  if (!ok && e.result == Outcome3::Pass) {
    e.result = Outcome3::Fail;
    e.message = why;
  }
}

inline std::string cell_str(const ValueTable& t, std::size_t x, std::size_t y) {
  return "(" + t.row_labels()[x] + ", " + t.col_labels()[y] + ")";
}

inline json cell_json(const CellValue& v) { return v ? json(*v) : json("."); }

class Runner {
 public:
  explicit Runner(ReproduceOptions o) : opt_(std::move(o)) {}

  void log(const std::string& s) const {
    if (opt_.log) opt_.log(s);
  }

  template <class F>
  void run(Report& r, const std::string& task, const std::string& instance, F&& body) {
    log("running " + task);
    Stopwatch sw;
    auto e = entry(task, instance);
    try {
      body(e);
    } catch (const std::exception& ex) {
      e.result = Outcome3::Fail;
      e.message = ex.what();
    }
    e.runtime_ms = sw.ms();
    log(task + ": " + to_string(e.result) + (e.message.empty() ? "" : " (" + e.message + ")"));
    r.entries.push_back(std::move(e));
  }

  std::string save_witness(const std::string& name, const ClassicalProtocol& p) const {
    if (opt_.witness_dir.empty()) return "";
    std::filesystem::create_directories(opt_.witness_dir);
    const auto path = (std::filesystem::path(opt_.witness_dir) / (name + ".json")).string();
    std::ofstream os(path, std::ios::binary);
    os << protocol_to_json(p).dump(2) << '\n';
    return path;
  }

  SolveOptions solve_options() const {
    SolveOptions o;
    o.threads = opt_.threads;
    o.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(opt_.solve_budget_s));
    o.progress = [this](int d, std::uint64_t nodes) {
      log("  depth " + std::to_string(d) + ", " + std::to_string(nodes) + " nodes");
    };
    return o;
  }

  // -- section 3 ------------------------------------------------------------

  void section3(Report& r) {
    run(r, "g.halfduplex", "g (3x3), 1 round, malicious", [](ReportEntry& e) {
      const auto s = g3_strategies();
      const auto cx = verify_halfduplex(s.first, s.second, gen_g3(), Adversary::Malicious);
      e.value = {{"rounds", 1}};
      expect(e, !cx, cx ? "counterexample at " + cell_str(gen_g3(), cx->x, cx->y) : "");
    });
    run(r, "g.classical", "g (3x3), partial-global", [this](ReportEntry& e) {
      const auto t = gen_g3();
      const auto res = cc_exact(t, SolveMode::PartialGlobal, solve_options());
      const int lb = cc_lower_bound(t, Rect::full(t), SolveMode::PartialGlobal);
      e.value = {{"cc", res.depth}, {"lower_bound", lb}};
      if (res.witness) e.witness = save_witness("g3", *res.witness);
      expect(e, res.depth == 2 && lb == 2, "expected cc = lower bound = 2");
    });
    run(r, "gn.halfduplex", "g_n, n = 1..4, malicious", [](ReportEntry& e) {
      e.value = json::array();
      for (int n = 1; n <= 4; ++n) {
        const auto s = gn_strategies(n);
        const auto cx = verify_halfduplex(s.first, s.second, gen_gn(n), Adversary::Malicious);
        e.value.push_back({{"n", n}, {"rounds", n}, {"ok", !cx}});
        expect(e, !cx, "n = " + std::to_string(n) + " fails");
      }
    });
    run(r, "gn.lower-bound", "g_n, n = 1..4, partial-global", [](ReportEntry& e) {
      e.value = json::array();
      for (int n = 1; n <= 4; ++n) {
        const auto t = gen_gn(n);
        const int lb = cc_lower_bound(t, Rect::full(t), SolveMode::PartialGlobal);
        e.value.push_back({{"n", n}, {"lower_bound", lb}});
        expect(e, lb == 2 * n, "n = " + std::to_string(n) + ": bound " + std::to_string(lb));
      }
    });
    run(r, "gn.local", "g_n, n = 1..4, local semantics", [](ReportEntry& e) {
      e.value = json::array();
      for (int n = 1; n <= 4; ++n) {
        const auto p = gn_local_protocol(n);
        const auto cx = verify_classical(p, gen_gn(n), Semantics::Local);
        const int want = n + ceil_log2(static_cast<std::uint64_t>(n) + 1);
        e.value.push_back({{"n", n}, {"depth", p.depth()}, {"ok", !cx}});
        expect(e, !cx && p.depth() == want, "n = " + std::to_string(n) + " fails");
      }
    });
    run(r, "gn.simple-counts", "simple inputs, n = 1..10", [](ReportEntry& e) {
      e.value = json::array();
      for (int n = 1; n <= 10; ++n) {
        const auto c = simple_input_counts(n);
        const std::uint64_t p = std::uint64_t{1} << n;
        const auto un = static_cast<std::uint64_t>(n);
        e.value.push_back({{"n", n}, {"green", c.green}, {"blue", c.blue}});
        expect(e, c.green == (un + 1) * p && c.blue == (un - 1) * p + 1, "n = " + std::to_string(n));
      }
    });
    run(r, "gn.counting-bound", "local lower bound, n = 1..10", [](ReportEntry& e) {
      e.value = json::array();
      for (int n = 1; n <= 10; ++n) {
        const auto b = counting_lower_bound(n);
        e.value.push_back({{"n", n},
                           {"numerator", b.numerator},
                           {"denominator", b.denominator},
                           {"log2", b.log2_value},
                           {"asymptotic", b.asymptotic}});
      }
    });
  }

  // -- section 4 ------------------------------------------------------------

  void section4(Report& r) {
    run(r, "f4.honest", "f4 (5x5), 3 rounds, honest", [](ReportEntry& e) {
      const auto s = f4_strategies();
      const auto cx = verify_halfduplex(s.first, s.second, f4_table(), Adversary::Honest);
      e.value = {{"rounds", 3}};
      expect(e, !cx, cx ? "counterexample at " + cell_str(f4_table(), cx->x, cx->y) : "");
    });
    run(r, "f4.malicious-fails", "f4 (5x5), 3 rounds, malicious", [](ReportEntry& e) {
      const auto t = f4_table();
      const auto s = f4_strategies();
      const auto cx = verify_halfduplex(s.first, s.second, t, Adversary::Malicious);
      expect(e, cx.has_value(), "strategies unexpectedly survive a malicious adversary");
      if (!cx) return;
      e.value = {{"cell", {t.row_labels()[cx->x], t.col_labels()[cx->y]}},
                 {"want", cx->want},
                 {"alice_output", cx->outcome.a_out},
                 {"bob_output", cx->outcome.b_out},
                 {"alice_events", cx->outcome.a_events.str()},
                 {"bob_events", cx->outcome.b_events.str()}};
      expect(e, cx->x == 0 && cx->y == 0, "counterexample not at (r, r)");
    });
    run(r, "f4.fooling-set", "f4, 10 cells", [](ReportEntry& e) {
      const auto bad = check_fooling_set(f4_table(), f4_fooling10());
      e.value = {{"size", 10}, {"bound", ceil_log2(10)}};
      expect(e, !bad, "not a fooling set");
    });
    run(r, "f4.classical", "f4, total", [this](ReportEntry& e) {
      const auto res = cc_exact(f4_table(), SolveMode::Total, solve_options());
      e.value = {{"cc", res.depth}, {"nodes", res.stats.nodes_expanded}};
      if (res.witness) e.witness = save_witness("f4", *res.witness);
      expect(e, res.depth == 4, "expected 4");
    });
  }

  // -- general checks ---------------------------------------------------------

  void general(Report& r) {
    run(r, "solver.named", "EQ/IP/DISJ n = 1, 2 and EQ_3, total", [this](ReportEntry& e) {
      e.value = json::array();
      const std::pair<NamedFamily, const char*> fams[] = {
          {NamedFamily::EQ, "EQ"}, {NamedFamily::IP, "IP"}, {NamedFamily::DISJ, "DISJ"}};
      for (const auto& [f, name] : fams) {
        for (int n = 1; n <= (f == NamedFamily::EQ ? 3 : 2); ++n) {
          const auto res = cc_exact(gen_named(f, n), SolveMode::Total, solve_options());
          e.value.push_back({{"function", std::string(name) + "_" + std::to_string(n)}, {"cc", res.depth}});
          expect(e, res.depth == n + 1, std::string(name) + "_" + std::to_string(n));
        }
      }
    });
    run(r, "fn.power", "f4^2", [](ReportEntry& e) {
      const auto base = f4_table();
      const auto t = power_table(base, 2);
      const auto f = power_fooling(f4_fooling10(), base, 2);
      const bool fool = !check_fooling_set(t, f);
      const auto s = product_strategies(f4_strategies(), 2, 5, 5, power_base(base));
      const auto cx = verify_halfduplex(s.first, s.second, t, Adversary::Honest);
      e.value = {{"fooling_size", f.size()}, {"bound", ceil_log2(f.size())}, {"rounds", s.first.rounds}};
      expect(e, fool && f.size() == 100, "fooling set check failed");
      expect(e, !cx && s.first.rounds == 6, "product strategies fail");
    });
    run(r, "embedding", "EQ_2 witness as half-duplex strategies", [this](ReportEntry& e) {
      const auto t = gen_named(NamedFamily::EQ, 2);
      const auto res = cc_exact(t, SolveMode::Total, solve_options());
      if (!res.witness) throw Error("no witness");
      const auto s = classical_to_halfduplex(*res.witness);
      int silent = 0, spent = 0, pairs = 0;
      bool same = true;
      for (std::size_t x = 0; x < 4; ++x) {
        for (std::size_t y = 0; y < 4; ++y) {
          for (const auto& o : run_halfduplex(s.first, s.second, x, y, Adversary::Malicious)) {
            silent += o.silent_rounds;
            spent += o.spent_rounds;
            same = same && o.a_out == o.b_out && o.a_out == *t.at(x, y);
          }
          ++pairs;
        }
      }
      e.value = {{"pairs", pairs}, {"silent_rounds", silent}, {"spent_rounds", spent}, {"rounds", s.first.rounds}};
      expect(e, silent == 0 && spent == 0 && same, "embedding is not faithful");
    });
  }

  // -- section 5 ------------------------------------------------------------

  void section5(Report& r) {
    std::optional<ValueTable> U, M;
    bool hd_ok = false, cc_ok = false;
    run(r, "pi.protocol", "U (144x17), 5 rounds, malicious", [&](ReportEntry& e) {
      AdversaryCheck ac;
      U = build_U(&ac);
      const auto s = pi_strategies();
      const auto cx = verify_halfduplex(s.first, s.second, *U, Adversary::Malicious);
      e.value = {{"rows", U->rows()}, {"cols", U->cols()}, {"pairs", ac.pairs}, {"branches", ac.branches},
                 {"rounds", 5}, {"distinct_values", U->distinct_values().size()}};
      expect(e, !cx, cx ? "counterexample at " + cell_str(*U, cx->x, cx->y) : "");
      hd_ok = e.result == Outcome3::Pass;
    });
    if (!U) return;
    run(r, "m.figure-diff", "M (29x15) vs printed figure", [&](ReportEntry& e) {
      M = build_M(*U);
      const auto d = diff(*M, figure_M());
      const std::size_t cells = M->rows() * M->cols();
      json mism = json::array();
      for (const auto& m : d) {
        mism.push_back({{"row", m.row}, {"col", m.col}, {"generated", cell_json(m.generated)},
                        {"figure", cell_json(m.figure)}});
      }
      e.value = {{"rows", M->rows()}, {"cols", M->cols()}, {"cells", cells}, {"matching", cells - d.size()},
                 {"mismatches", mism}};
      expect(e, M->rows() == 29 && M->cols() == 15, "wrong shape");
      expect(e, static_cast<double>(cells - d.size()) >= 0.95 * static_cast<double>(cells), "too many mismatches");
      if (!d.empty()) log("  figure mismatches: " + std::to_string(d.size()));
    });
    const auto H = fooling_family_horizontal(), V = fooling_family_vertical();
    run(r, "families", "horizontal (25) and vertical (29) on U and M", [&](ReportEntry& e) {
      e.value = json::array();
      auto check = [&](const ValueTable& t, const FoolingFamily& f) {
        const auto c = verify_fooling_family(t, f);
        e.value.push_back({{"family", f.id}, {"rects", f.size()}, {"cells", c.cells}, {"ok", c.ok()}});
        expect(e, c.ok(), f.id + ": " + (c.ok() ? "" : c.violation->message));
      };
      check(*U, H);
      check(*U, V);
      if (M) {
        check(*M, on_M(H, "m-horizontal"));
        check(*M, on_M(V, "m-vertical"));
      }
    });
    run(r, "graph.horizontal", "horizontal adjacency, 9-subsets", [&](ReportEntry& e) {
      const auto g = build_adjacency(H, Axis::Horizontal);
      const bool same = g.adj == expected_horizontal_graph().adj;
      const auto ex = check_expansion(g, 9, 17, progress("9-subsets"));
      e.value = {{"matches_expected", same}, {"k", 9}, {"min", 17}, {"covered", ex.covered}, {"total", ex.total}};
      expect(e, same, "graph differs from the expected structure");
      expect(e, ex.ok && ex.covered == ex.total, "expansion fails");
    });
    run(r, "graph.vertical", "vertical adjacency, components and neighbourhood table", [&](ReportEntry& e) {
      const auto g = build_adjacency(V, Axis::Vertical);
      const auto want = expected_vertical_structure();
      const auto hub = g.index(want.hub);
      const auto comps = g.components(std::uint64_t{1} << hub);
      bool comps_ok = comps.size() == want.components.size();
      for (const auto& c : want.components) {
        comps_ok = comps_ok && std::ranges::find(comps, g.mask(c)) != comps.end();
      }
      const auto hub_nb = g.adj[hub] & ~(std::uint64_t{1} << hub);
      const bool hub_ok = hub_nb == g.mask(want.hub_neighbours);
      const auto rows = gamma_table(g, g.mask(want.components[1]), hub);
      json tab = json::array();
      int matched = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [inner, with_hub] = neighbourhood_table_values()[i];
        matched += (static_cast<int>(rows[i].inner) == inner) + (static_cast<int>(rows[i].with_hub) == with_hub);
        tab.push_back({{"n", rows[i].n}, {"inner", rows[i].inner}, {"with_hub", rows[i].with_hub}});
      }
      e.value = {{"components_ok", comps_ok}, {"hub_ok", hub_ok}, {"table", tab}, {"table_matches", matched}};
      expect(e, comps_ok, "components differ");
      expect(e, hub_ok, "hub neighbourhood differs");
      expect(e, matched == 24, "neighbourhood table differs");
    });
    run(r, "graph.vertical-expansion", "vertical adjacency, 13-subsets", [&](ReportEntry& e) {
      const auto g = build_adjacency(V, Axis::Vertical);
      const auto ok = check_expansion(g, 13, 17, progress("13-subsets"));
      const auto named = g.mask(expected_vertical_structure().tight_set);
      const auto tight = check_expansion(g, 13, 18, {}, SIZE_MAX);
      const bool named_found = std::ranges::find(tight.witnesses, named) != tight.witnesses.end();
      const auto named_nb = std::popcount(g.neighbours(named));
      e.value = {{"k", 13},
                 {"min", 17},
                 {"covered", ok.covered},
                 {"total", ok.total},
                 {"tight_witnesses", tight.witnesses.size()},
                 {"tight_min_neighbours", tight.witness_neighbours},
                 {"named_witness", g.names(named)},
                 {"named_witness_neighbours", named_nb}};
      e.witness = "named_witness";
      expect(e, ok.ok && ok.covered == ok.total, "some 13-subset has fewer than 17 neighbours");
      expect(e, !tight.ok && tight.witness_neighbours == 17, "threshold 18 is not tight");
      expect(e, named_found && named_nb == 17, "left component plus R0 is not a tight witness");
    });
    if (M) {
      const auto HM = on_M(H, "m-horizontal"), VM = on_M(V, "m-vertical");
      for (const auto& [fam, axis, name] : {std::tuple{&HM, Axis::Horizontal, "rows"},
                                            std::tuple{&VM, Axis::Vertical, "cols"}}) {
        run(r, std::string("certificate.") + name, std::string("M, ") + fam->id + ", threshold 17", [&](ReportEntry& e) {
          const auto c = bipartition_certificate(*M, *fam, axis, 17);
          e.value = {{"family_ok", c.family_ok},
                     {"bipartition_ok", c.bipartition_ok},
                     {"bipartitions", c.bipartitions_checked},
                     {"bound", c.bound ? json(*c.bound) : json(nullptr)}};
          expect(e, c.bound == 6, "no bound 6 (" + c.family_message + ")");
          cc_ok = cc_ok || e.result == Outcome3::Pass;
        });
      }
    }
    run(r, "s.classical", "S (15x13), total", [&](ReportEntry& e) {
      const auto res = cc_exact(figure_S(), SolveMode::Total, solve_options());
      e.value = {{"cc", res.status == SolveStatus::Solved ? json(res.depth) : json(nullptr)},
                 {"proven_above", res.proven_above},
                 {"nodes", res.stats.nodes_expanded},
                 {"memo_entries", res.stats.memo_entries}};
      if (res.status == SolveStatus::BudgetExceeded) {
        e.result = Outcome3::Budget;
        e.message = "solver budget exceeded";
        return;
      }
      if (res.witness) e.witness = save_witness("s", *res.witness);
      expect(e, res.depth == 6, "expected 6");
    });
    run(r, "s.partition", "S, minimum single-valued rect partition per value", [](ReportEntry& e) {
      const auto S = figure_S();
      std::map<Value, std::vector<Cell>> by_value;
      for (std::size_t x = 0; x < S.rows(); ++x) {
        for (std::size_t y = 0; y < S.cols(); ++y) by_value[*S.at(x, y)].push_back({x, y});
      }
      std::vector<Rect> all;
      json per = json::object();
      for (const auto& [v, cells] : by_value) {
        const auto p = min_rect_partition(S, cells);
        per[std::to_string(v)] = p.count;
        expect(e, p.count == (v == 0 ? 6U : 2U), "value " + std::to_string(v) + " needs " + std::to_string(p.count));
        all.insert(all.end(), p.rects.begin(), p.rects.end());
      }
      const auto bad = verify_partition(S, all, SolveMode::Total);
      e.value = {{"per_value", per}, {"total", all.size()}};
      expect(e, !bad, bad ? bad->message : "");
      expect(e, all.size() == 30, "expected 30 rects");
    });
    if (hd_ok && cc_ok) {
      r.summary["separation"] = std::string("HD(U) ≤ 5 < 6 ≤ CC(M): ") + kSeparation;
    }
  }

  std::function<void(std::uint64_t, std::uint64_t)> progress(const std::string& what) const {
    return [this, what](std::uint64_t done, std::uint64_t total) {
      log("  " + what + ": " + std::to_string(done) + " / " + std::to_string(total));
    };
  }

 private:
  ReproduceOptions opt_;
};

}  // namespace detail

inline const std::vector<std::string>& reproduce_scopes() {
  static const std::vector<std::string> s{"all", "section-3", "section-4", "section-5"};
  return s;
}

inline Report reproduce(const std::string& scope, ReproduceOptions opt = {}) {
  if (std::ranges::find(reproduce_scopes(), scope) == reproduce_scopes().end()) {
    throw UsageError("unknown scope '" + scope + "' (all, section-3, section-4, section-5)");
  }
  Report r;
  r.command = "reproduce " + scope;
  detail::Runner run(std::move(opt));
  if (scope == "all" || scope == "section-3") run.section3(r);
  if (scope == "all" || scope == "section-4") run.section4(r);
  if (scope == "all") run.general(r);
  if (scope == "all" || scope == "section-5") run.section5(r);
  std::size_t passed = 0;
  for (const auto& e : r.entries) passed += e.result == Outcome3::Pass;
  r.summary["scope"] = scope;
  r.summary["passed"] = passed;
  r.summary["total"] = r.entries.size();
  return r;
}

}  // namespace ccwb
