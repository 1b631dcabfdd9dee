#include <gtest/gtest.h>

#include <set>

#include "ccwb/constructions.hpp"
#include "ccwb/figures.hpp"
#include "ccwb/solver.hpp"

using namespace ccwb;

namespace {

std::vector<CellValue> column(const ValueTable& t, std::size_t y) {
  std::vector<CellValue> out;
  for (std::size_t x = 0; x < t.rows(); ++x) out.push_back(t.at(x, y));
  return out;
}

}  // namespace

TEST(CountingBound, SmallN) {
  const auto b1 = counting_lower_bound(1);
  EXPECT_EQ(b1.numerator, 16U);
  EXPECT_EQ(b1.denominator, 6U);
  const auto b2 = counting_lower_bound(2);
  EXPECT_EQ(b2.numerator, 144U);
  EXPECT_EQ(b2.denominator, 22U);
  EXPECT_NEAR(b2.value, 144.0 / 22.0, 1e-12);
  EXPECT_THROW(counting_lower_bound(0), SizeLimitError);
  for (int n = 1; n < 20; ++n) EXPECT_LT(counting_lower_bound(n).value, counting_lower_bound(n + 1).value);
}

TEST(F4, CellsAndFoolingSet) {
  const auto t = f4_table();
  EXPECT_EQ(t.at(0, 2), CellValue(2));  // (r, 01)
  EXPECT_EQ(t.at(3, 0), CellValue(2));  // (10, r)
  EXPECT_EQ(t.at(1, 4), CellValue(2));  // (00, 11)
  const auto f = f4_fooling10();
  EXPECT_EQ(f.size(), 10U);
  EXPECT_EQ(std::set<Cell>(f.begin(), f.end()).size(), 10U);
  EXPECT_NE(std::ranges::find(f, Cell{1, 4}), f.end());
}

TEST(Power, BaseCaseAndShape) {
  EXPECT_EQ(power_table(f4_table(), 1), f4_table());
  const auto t2 = power_table(f4_table(), 2);
  EXPECT_EQ(t2.rows(), 25U);
  EXPECT_EQ(t2.cols(), 25U);
  const Value base = power_base(f4_table());
  EXPECT_EQ(t2.at(0 * 5 + 3, 2 * 5 + 0), CellValue(*f4_table().at(0, 2) * base + *f4_table().at(3, 0)));
  const auto cells = power_fooling(f4_fooling10(), f4_table(), 2);
  EXPECT_EQ(cells.size(), 100U);
  EXPECT_FALSE(check_fooling_set(t2, cells));
}

TEST(Power, ProductStrategiesHonest) {
  const auto s = product_strategies(f4_strategies(), 2, 5, 5, power_base(f4_table()));
  EXPECT_EQ(s.first.rounds, 6);
  EXPECT_FALSE(verify_halfduplex(s.first, s.second, power_table(f4_table(), 2), Adversary::Honest));
}

TEST(Transcripts, IdentificationCollapsesFour) {
  std::set<Value> images;
  int collapsed = 0;
  for (unsigned t = 0; t < 16; ++t) {
    images.insert(identify_transcript(t));
    collapsed += identify_transcript(t) == 0;
  }
  EXPECT_EQ(collapsed, 4);
  EXPECT_EQ(images.size(), 13U);
  History h;
  for (auto e : {Event::Recv0, Event::Sent1, Event::Recv0, Event::Sent1, Event::Recv0}) h.push(e);
  EXPECT_EQ(transcript_value(h), 0U);  // 1010
  History g;
  for (auto e : {Event::Sent1, Event::Recv0, Event::Sent1, Event::Recv1, Event::Sent0}) g.push(e);
  EXPECT_EQ(transcript_value(g), 6U);  // 0110
}

TEST(Pi, IndexMaps) {
  EXPECT_EQ(pi::eta_row(5), 5U);
  EXPECT_EQ(pi::psi_row(0, 3), 19U);
  EXPECT_EQ(pi::psi_row(1, 0), 80U);
  EXPECT_EQ(pi::phi_col(0, 2), 3U);
  EXPECT_EQ(pi::phi_col(1, 7), 16U);
  EXPECT_EQ(pi::alice_input(81).j, 1);
  EXPECT_EQ(pi::alice_input(81).map, 1U);
  EXPECT_TRUE(pi::bob_input(0).receive_first);
  EXPECT_EQ(pi::phi_lambda(0b100), 1);
  EXPECT_EQ(pi::phi_at(0b010, 0), 1);
  EXPECT_EQ(pi::phi_at(0b010, 1), 0);
  EXPECT_EQ(pi::psi1(0b100000, 0), 1);
  EXPECT_EQ(pi::psi2(0b000001, 1, 1), 1);
  EXPECT_EQ(pi::row_labels().size(), 144U);
  EXPECT_EQ(pi::col_labels().size(), 17U);
}

TEST(Pi, HonestRunsOfExampleInputs) {
  const auto s = pi_strategies();
  // Alice sends j = 0 with psi = 0, Bob sends i = 0 with phi = 010.
  const auto outs = run_halfduplex(s.first, s.second, pi::psi_row(0, 0), pi::phi_col(0, 0b010), Adversary::Malicious);
  ASSERT_FALSE(outs.empty());
  for (const auto& o : outs) {
    EXPECT_EQ(o.a_out, o.b_out);
    EXPECT_EQ(o.a_out, outs.front().a_out);
  }
}

TEST(U, ShapeAndCells) {
  AdversaryCheck check;
  const auto u = build_U(&check);
  EXPECT_EQ(u.rows(), 144U);
  EXPECT_EQ(u.cols(), 17U);
  EXPECT_TRUE(u.is_total());
  EXPECT_EQ(check.pairs, 144U * 17U);
  EXPECT_GT(check.branches, check.pairs);
  EXPECT_EQ(u.at(0, 3), CellValue(2));
  for (std::size_t x = 0; x < u.rows(); ++x) {
    // Both receive first: Bob echoes, so the transcript is one of the identified ones.
    if (x < 16) {
      EXPECT_EQ(u.at(x, 0), CellValue(0));
    }
  }
  for (const auto v : u.distinct_values()) {
    EXPECT_NE(v, 5U);
    EXPECT_NE(v, 10U);
    EXPECT_NE(v, 15U);
  }
}

TEST(M, MatchesFigure) {
  const auto m = build_M();
  EXPECT_TRUE(diff(m, figure_M()).empty());
  EXPECT_EQ(m, select(build_U(), m_selection().rows, m_selection().cols));
  EXPECT_EQ(m_selection().rows.size(), 29U);
  EXPECT_EQ(m_selection().cols.size(), 15U);
  auto changed = figure_M();
  auto cells = changed.cells();
  cells[7] = *cells[7] == 0 ? Value{1} : Value{0};
  const ValueTable other(changed.row_labels(), changed.col_labels(), cells);
  const auto d = diff(m, other);
  ASSERT_EQ(d.size(), 1U);
  EXPECT_EQ(d[0].row, 0U);
  EXPECT_EQ(d[0].col, 7U);
}

TEST(FirstRealization, ColumnStructure) {
  const auto t = first_realization_table();
  EXPECT_EQ(t.rows(), 10U);
  EXPECT_EQ(t.cols(), 9U);
  std::set<std::vector<CellValue>> distinct;
  for (std::size_t y = 0; y < t.cols(); ++y) distinct.insert(column(t, y));
  EXPECT_EQ(distinct.size(), 7U);
  EXPECT_EQ(column(t, 1), column(t, 5));
  EXPECT_EQ(column(t, 4), column(t, 8));
}

TEST(Families, RectsAreOnTheRightLines) {
  const auto h = fooling_family_horizontal();
  EXPECT_EQ(h.id, "u-horizontal");
  EXPECT_EQ(h.size(), 25U);
  EXPECT_FALSE(h.index_of("R5"));
  EXPECT_FALSE(h.index_of("S0"));
  const auto v = fooling_family_vertical();
  EXPECT_EQ(v.size(), 29U);
  for (const auto* n : {"R5", "R10", "R15", "S0"}) EXPECT_TRUE(v.index_of(n)) << n;
  for (const auto& nr : h.rects) {
    EXPECT_GT(nr.rect.rows.count(), 0U) << nr.name;
    EXPECT_GT(nr.rect.cols.count(), 0U) << nr.name;
  }
  const auto m = on_M(h, "m-h");
  EXPECT_EQ(m.size(), 25U);
  EXPECT_TRUE(verify_fooling_family(build_M(), m).ok());
}

TEST(Vertical, ExpectedStructureNames) {
  const auto v = expected_vertical_structure();
  std::size_t total = 1;
  for (const auto& c : v.components) total += c.size();
  EXPECT_EQ(total, 29U);
  EXPECT_EQ(v.tight_set.size(), 13U);
  EXPECT_EQ(neighbourhood_table_values().size(), 12U);
}

TEST(SmallProtocols, ClassicalOfF4AndG) {
  EXPECT_EQ(cc_exact(f4_table(), SolveMode::Total).depth, 4);
  EXPECT_EQ(cc_exact(gen_gn(2), SolveMode::PartialGlobal).depth, 4);
  EXPECT_EQ(gn_local_protocol(1).depth(), 2);
  EXPECT_FALSE(verify_classical(gn_local_protocol(1), gen_g3(), Semantics::Local));
}
