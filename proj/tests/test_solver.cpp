#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ccwb/constructions.hpp"
#include "ccwb/figures.hpp"
#include "ccwb/solver.hpp"
#include "oracle.hpp"

using namespace ccwb;

namespace {

ValueTable random_table(std::mt19937& rng, std::size_t max_side, Value values, int undefined_percent) {
  const std::size_t R = 1 + rng() % max_side, C = 1 + rng() % max_side;
  std::vector<std::vector<CellValue>> rows(R, std::vector<CellValue>(C));
  for (auto& r : rows) {
    for (auto& c : r) {
      if (static_cast<int>(rng() % 100) >= undefined_percent) c = static_cast<Value>(rng() % values);
    }
  }
  return ValueTable::from_rows(rows);
}

void expect_witness(const ValueTable& t, SolveMode mode, const SolveResult& r) {
  ASSERT_TRUE(r.witness);
  EXPECT_LE(r.witness->depth(), r.depth);
  EXPECT_NO_THROW(r.witness->validate());
  const auto sem = mode == SolveMode::PartialLocal ? Semantics::Local : Semantics::Global;
  EXPECT_FALSE(verify_classical(*r.witness, t, sem));
  if (mode == SolveMode::Total) {
    for (const auto& lr : leaf_rects(*r.witness)) {
      for (auto x : lr.rect.rows.indices()) {
        for (auto y : lr.rect.cols.indices()) EXPECT_EQ(*t.at(x, y), r.witness->node(lr.leaf).value);
      }
    }
  }
}

}  // namespace

TEST(CcLeq, Examples) {
  const auto one = ValueTable::from_rows({{3}});
  EXPECT_TRUE(cc_leq(one, Rect::full(one), 0, SolveMode::Total).first);
  const auto eq1 = gen_named(NamedFamily::EQ, 1);
  EXPECT_FALSE(cc_leq(eq1, Rect::full(eq1), 1, SolveMode::Total).first);
  const auto [ok, w] = cc_leq(eq1, Rect::full(eq1), 2, SolveMode::Total);
  EXPECT_TRUE(ok);
  ASSERT_TRUE(w);
  EXPECT_FALSE(verify_classical(*w, eq1, Semantics::Global));
}

TEST(CcLeq, SubRectangle) {
  const auto eq = gen_named(NamedFamily::EQ, 2);
  const Rect r{DynamicBitset(4, {0, 1}), DynamicBitset(4, {2, 3})};
  EXPECT_TRUE(cc_leq(eq, r, 0, SolveMode::Total).first);
}

TEST(CcLeq, SFiveIsInfeasible) {
  const auto s = figure_S();
  EXPECT_FALSE(cc_leq(s, Rect::full(s), 5, SolveMode::Total).first);
}

TEST(CcExact, NamedFunctions) {
  for (int n = 1; n <= 2; ++n) {
    for (auto f : {NamedFamily::EQ, NamedFamily::IP, NamedFamily::DISJ}) {
      const auto t = gen_named(f, n);
      const auto r = cc_exact(t, SolveMode::Total);
      EXPECT_EQ(r.depth, n + 1);
      expect_witness(t, SolveMode::Total, r);
    }
  }
  EXPECT_EQ(cc_exact(gen_named(NamedFamily::EQ, 3), SolveMode::Total).depth, 4);
}

TEST(CcExact, PaperInstances) {
  const auto g = cc_exact(gen_g3(), SolveMode::PartialGlobal);
  EXPECT_EQ(g.depth, 2);
  expect_witness(gen_g3(), SolveMode::PartialGlobal, g);
  const auto f = cc_exact(f4_table(), SolveMode::Total);
  EXPECT_EQ(f.depth, 4);
  expect_witness(f4_table(), SolveMode::Total, f);
  const auto s = cc_exact(figure_S(), SolveMode::Total);
  EXPECT_EQ(s.depth, 6);
  expect_witness(figure_S(), SolveMode::Total, s);
}

TEST(CcExact, LocalModeOnGn) {
  // A partial table may be cheaper under local leaves.
  const auto t = diagonal_partial(3);
  EXPECT_EQ(cc_exact(t, SolveMode::PartialLocal).depth, 0);
  EXPECT_EQ(cc_exact(t, SolveMode::PartialGlobal).depth, 3);
  const auto g = cc_exact(gen_g3(), SolveMode::PartialLocal);
  expect_witness(gen_g3(), SolveMode::PartialLocal, g);
  EXPECT_EQ(g.depth, oracle::cc(gen_g3(), SolveMode::PartialLocal));
}

TEST(CcExact, BudgetExceeded) {
  SolveOptions o;
  o.max_depth = 3;
  const auto r = cc_exact(f4_table(), SolveMode::Total, o);
  EXPECT_EQ(r.status, SolveStatus::BudgetExceeded);
  EXPECT_EQ(r.proven_above, 3);
  SolveOptions late;
  late.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  late.max_depth = 10;
  const auto big = cc_exact(figure_M(), SolveMode::Total, late);
  EXPECT_EQ(big.status, SolveStatus::BudgetExceeded);
}

TEST(CcExact, ModeChecks) {
  EXPECT_THROW(cc_exact(gen_g3(), SolveMode::Total), UsageError);
  EXPECT_EQ(parse_solve_mode("partial-local"), SolveMode::PartialLocal);
  EXPECT_FALSE(parse_solve_mode("bogus"));
}

TEST(LowerBound, Examples) {
  const auto g2 = gen_gn(2);
  EXPECT_EQ(cc_lower_bound(g2, Rect::full(g2), SolveMode::PartialGlobal), 4);
  const auto c = ValueTable::from_rows({{1, 1}, {1, 1}});
  EXPECT_EQ(cc_lower_bound(c, Rect::full(c), SolveMode::Total), 0);
  const auto f = f4_table();
  EXPECT_EQ(cc_lower_bound(f, Rect::full(f), SolveMode::Total, f4_fooling10()), 4);
  for (int n = 1; n <= 4; ++n) {
    const auto g = gen_gn(n);
    EXPECT_EQ(cc_lower_bound(g, Rect::full(g), SolveMode::PartialGlobal), 2 * n);
  }
}

// Exhaustive oracle agreement.

TEST(Oracle, AllTwoByTwoBinaryTables) {
  for (unsigned m = 0; m < 16; ++m) {
    const auto t = ValueTable::from_rows({{Value(m & 1), Value((m >> 1) & 1)}, {Value((m >> 2) & 1), Value((m >> 3) & 1)}});
    const auto r = cc_exact(t, SolveMode::Total);
    EXPECT_EQ(r.depth, oracle::cc(t, SolveMode::Total)) << m;
    expect_witness(t, SolveMode::Total, r);
  }
}

TEST(Oracle, RandomTotalTables) {
  std::mt19937 rng(2024);
  for (int it = 0; it < 1200; ++it) {
    const auto t = random_table(rng, 4, 3, 0);
    const auto r = cc_exact(t, SolveMode::Total);
    ASSERT_EQ(r.depth, oracle::cc(t, SolveMode::Total)) << to_ccmat(t);
    expect_witness(t, SolveMode::Total, r);
  }
}

TEST(Oracle, RandomPartialTables) {
  std::mt19937 rng(99);
  for (int it = 0; it < 400; ++it) {
    const auto t = random_table(rng, 4, 3, 30);
    if (t.is_total()) continue;
    for (auto mode : {SolveMode::PartialGlobal, SolveMode::PartialLocal}) {
      const auto r = cc_exact(t, mode);
      ASSERT_EQ(r.depth, oracle::cc(t, mode)) << to_string(mode) << "\n" << to_ccmat(t);
      expect_witness(t, mode, r);
    }
  }
}

// Properties.

TEST(Properties, TranspositionPermutationDuplication) {
  std::mt19937 rng(17);
  for (int it = 0; it < 150; ++it) {
    const auto t = random_table(rng, 5, 4, 0);
    const int d = cc_exact(t, SolveMode::Total).depth;
    EXPECT_EQ(cc_exact(transpose(t), SolveMode::Total).depth, d);
    std::vector<std::size_t> rows(t.rows()), cols(t.cols());
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    const auto perm = select(t, rows, cols);
    EXPECT_EQ(cc_exact(perm, SolveMode::Total).depth, d);
    std::vector<std::vector<CellValue>> dup;
    for (auto x : rows) {
      dup.emplace_back();
      for (auto y : cols) dup.back().push_back(t.at(x, y));
    }
    dup.push_back(dup.front());
    EXPECT_EQ(cc_exact(ValueTable::from_rows(dup), SolveMode::Total).depth, d);
  }
}

TEST(Properties, LowerBoundAdmissibleAndFoolingSound) {
  std::mt19937 rng(23);
  for (int it = 0; it < 200; ++it) {
    const auto t = random_table(rng, 5, 3, 0);
    const int d = cc_exact(t, SolveMode::Total).depth;
    EXPECT_LE(cc_lower_bound(t, Rect::full(t), SolveMode::Total), d);
    const auto f = greedy_fooling_set(t, Rect::full(t), SolveMode::Total);
    EXPECT_LE(ceil_log2(f.size()), d);
  }
  for (int n = 1; n <= 3; ++n) {
    const auto eq = gen_named(NamedFamily::EQ, n);
    EXPECT_GE(cc_exact(eq, SolveMode::Total).depth, ceil_log2(std::size_t{1} << n));
  }
}

TEST(Properties, ThreadCountInvariant) {
  std::mt19937 rng(31);
  SolveOptions o;
  o.threads = 3;
  for (int it = 0; it < 60; ++it) {
    const auto t = random_table(rng, 6, 3, 0);
    EXPECT_EQ(cc_exact(t, SolveMode::Total, o).depth, cc_exact(t, SolveMode::Total).depth);
  }
  const auto s = cc_exact(figure_S(), SolveMode::Total, o);
  EXPECT_EQ(s.depth, 6);
  expect_witness(figure_S(), SolveMode::Total, s);
}

TEST(Properties, TinyMemoCapStillCorrect) {
  SolveOptions o;
  o.memo_cap_bytes = 4096;
  const auto s = cc_exact(f4_table(), SolveMode::Total, o);
  EXPECT_EQ(s.depth, 4);
  expect_witness(f4_table(), SolveMode::Total, s);
}

TEST(Limits, TooManyDistinctLines) {
  EXPECT_THROW(cc_exact(gen_named(NamedFamily::EQ, 7), SolveMode::Total), SizeLimitError);
}
