#include <gtest/gtest.h>

#include <random>

#include "ccwb/constructions.hpp"
#include "ccwb/protocol.hpp"

using namespace ccwb;

TEST(RunClassical, Depth3Example) {
  const auto p = depth3_example_protocol();
  EXPECT_EQ(p.depth(), 3);
  const auto run = run_classical(p, 0b010, 0b110);
  EXPECT_EQ(run.transcript, (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(p.node(run.leaf).value, 4U);
}

TEST(RunClassical, DepthZero) {
  ClassicalProtocol p(1, 1, LeafKind::Global);
  p.set_root(p.add_global_leaf(7));
  const auto run = run_classical(p, 0, 0);
  EXPECT_TRUE(run.transcript.empty());
  EXPECT_EQ(p.node(run.leaf).value, 7U);
}

TEST(RunClassical, Eq1ByHand) {
  const auto p = eq1_protocol();
  const auto run = run_classical(p, 0, 0);
  EXPECT_EQ(run.transcript, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(p.node(run.leaf).value, 1U);
  EXPECT_FALSE(verify_classical(p, gen_named(NamedFamily::EQ, 1), Semantics::Global));
}

TEST(VerifyClassical, Examples) {
  const auto diag = diagonal_partial(3);
  EXPECT_FALSE(verify_classical(identity_local_protocol(8), diag, Semantics::Local));

  ClassicalProtocol zero(2, 2, LeafKind::Global);
  zero.set_root(zero.add_global_leaf(0));
  const auto cx = verify_classical(zero, gen_named(NamedFamily::EQ, 1), Semantics::Global);
  ASSERT_TRUE(cx);
  EXPECT_EQ(cx->x, 0U);
  EXPECT_EQ(cx->y, 0U);
  EXPECT_EQ(cx->want, 1U);

  EXPECT_FALSE(verify_classical(gn_local_protocol(2), gen_gn(2), Semantics::Local));
  EXPECT_EQ(gn_local_protocol(2).depth(), 4);
  EXPECT_THROW(verify_classical(zero, gen_named(NamedFamily::EQ, 1), Semantics::Local), UsageError);
}

TEST(VerifyClassical, LocalLeafNeedsBothSides) {
  // Alice answers correctly, Bob does not.
  ClassicalProtocol p(1, 1, LeafKind::Local);
  p.set_root(p.add_local_leaf({5}, {6}));
  const auto t = ValueTable::from_rows({{5}});
  const auto cx = verify_classical(p, t, Semantics::Local);
  ASSERT_TRUE(cx);
  EXPECT_EQ(cx->got_a, 5U);
  EXPECT_EQ(cx->got_b, 6U);
}

TEST(LeafRects, Partition) {
  ClassicalProtocol zero(3, 2, LeafKind::Global);
  zero.set_root(zero.add_global_leaf(0));
  ASSERT_EQ(leaf_rects(zero).size(), 1U);
  EXPECT_EQ(leaf_rects(zero)[0].rect.cell_count(), 6U);

  EXPECT_EQ(leaf_rects(eq1_protocol()).size(), 4U);

  const auto p = depth3_example_protocol();
  const auto rects = leaf_rects(p);
  EXPECT_EQ(rects.size(), 8U);
  std::vector<int> hits(64, 0);
  for (const auto& lr : rects) {
    for (auto x : lr.rect.rows.indices()) {
      for (auto y : lr.rect.cols.indices()) {
        ++hits[x * 8 + y];
        EXPECT_EQ(run_classical(p, x, y).leaf, lr.leaf);
      }
    }
  }
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(ProtocolJson, RoundTrip) {
  for (const auto& p : {depth3_example_protocol(), eq1_protocol(), gn_local_protocol(2)}) {
    const auto j = protocol_to_json(p);
    const auto q = protocol_from_json(j);
    // Nodes may be renumbered on load; a second trip is stable.
    EXPECT_EQ(protocol_to_json(protocol_from_json(protocol_to_json(q))), protocol_to_json(q));
    EXPECT_EQ(q.depth(), p.depth());
    for (std::size_t x = 0; x < p.rows(); ++x) {
      for (std::size_t y = 0; y < p.cols(); ++y) {
        EXPECT_EQ(run_classical(q, x, y).transcript, run_classical(p, x, y).transcript);
      }
    }
  }
}

TEST(ProtocolJson, ForwardReferencesAccepted) {
  const auto j = nlohmann::json::parse(R"({"format":"ccwb-protocol","version":1,"rows":2,"cols":2,
    "leaf_kind":"global","root":0,"nodes":[
      {"owner":"A","bits":[0,1],"children":[1,2]},{"value":0},{"value":1}]})");
  const auto p = protocol_from_json(j);
  EXPECT_EQ(p.depth(), 1);
  EXPECT_EQ(p.node(run_classical(p, 1, 0).leaf).value, 1U);
}

TEST(ProtocolJson, RejectsBadDocuments) {
  auto base = [] {
    return nlohmann::json::parse(R"({"format":"ccwb-protocol","version":1,"rows":2,"cols":2,
      "leaf_kind":"global","root":0,"nodes":[
        {"owner":"A","bits":[0,1],"children":[1,2]},{"value":0},{"value":1}]})");
  };
  auto cycle = base();
  cycle["nodes"][1] = {{"owner", "B"}, {"bits", {0, 1}}, {"children", {0, 2}}};
  EXPECT_THROW(protocol_from_json(cycle), FormatError);
  auto dag = base();
  dag["nodes"][0]["children"] = {1, 1};
  EXPECT_THROW(protocol_from_json(dag), FormatError);
  auto bad_bits = base();
  bad_bits["nodes"][0]["bits"] = {0, 2};
  EXPECT_THROW(protocol_from_json(bad_bits), FormatError);
  auto short_bits = base();
  short_bits["nodes"][0]["bits"] = {0};
  EXPECT_THROW(protocol_from_json(short_bits), FormatError);
  auto wrong_format = base();
  wrong_format["format"] = "other";
  EXPECT_THROW(protocol_from_json(wrong_format), FormatError);
  auto missing = base();
  missing.erase("nodes");
  EXPECT_THROW(protocol_from_json(missing), FormatError);
}

TEST(ProtocolBuilder, RejectsWrongSizes) {
  ClassicalProtocol p(2, 3, LeafKind::Global);
  const auto l = p.add_global_leaf(0);
  EXPECT_THROW(p.add_internal(Owner::Bob, {0, 1}, l, l), FormatError);
  EXPECT_THROW(p.add_internal(Owner::Alice, {0, 1}, l, 9), FormatError);
  EXPECT_THROW(p.add_local_leaf({0, 0}, {0, 0, 0}), UsageError);
}

TEST(LeafRects, RandomProtocolsPartitionTheGrid) {
  std::mt19937 rng(11);
  for (int it = 0; it < 100; ++it) {
    const std::size_t R = 1 + rng() % 5, C = 1 + rng() % 5;
    ClassicalProtocol p(R, C, LeafKind::Global);
    auto build = [&](auto&& self, int depth) -> std::size_t {
      if (depth == 0 || rng() % 3 == 0) return p.add_global_leaf(rng() % 4);
      const bool alice = rng() % 2;
      std::vector<std::uint8_t> bits(alice ? R : C);
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng() % 2);
      const auto c0 = self(self, depth - 1);
      const auto c1 = self(self, depth - 1);
      return p.add_internal(alice ? Owner::Alice : Owner::Bob, bits, c0, c1);
    };
    p.set_root(build(build, 4));
    std::vector<int> hits(R * C, 0);
    for (const auto& lr : leaf_rects(p)) {
      for (auto x : lr.rect.rows.indices()) {
        for (auto y : lr.rect.cols.indices()) ++hits[x * C + y];
      }
    }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}
