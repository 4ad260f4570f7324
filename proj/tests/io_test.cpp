#include <gtest/gtest.h>

#include <random>

#include "authz/io.hpp"
#include "authz/revocation.hpp"
#include "support/fixtures.hpp"
#include "support/random_states.hpp"

namespace authz::test {
namespace {

using namespace authz::io;

std::string parse_error(std::string_view text) {
  try {
    parse_state(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

TEST(Fixtures, InputsParseToTheHandBuiltStates) {
  EXPECT_TRUE(states_equal(parse_state(read_fixture("basics.json")), basics()));
  EXPECT_TRUE(states_equal(parse_state(read_fixture("negated-chain.json")), negated_chain()));
  EXPECT_TRUE(states_equal(parse_state(read_fixture("base.json")), base()));
  EXPECT_EQ(parse_state(read_fixture("base.json")).time(), 7u);
}

TEST(Fixtures, CanonicalSerializationIsByteExact) {
  for (const char* name : {"basics.json", "negated-chain.json", "base.json", "empty6.json"}) {
    const std::string text = read_fixture(name);
    EXPECT_EQ(serialize_state(parse_state(text)), text) << name;
  }
}

TEST(Fixtures, SchemeOutputsMatchGoldens) {
  const auto s = base();
  const std::pair<Scheme, const char*> cases[] = {
      {Scheme::WLD, "base-wld.json"}, {Scheme::WGD, "base-wgd.json"},
      {Scheme::SLD, "base-sld.json"}, {Scheme::SGD, "base-sgd.json"},
      {Scheme::WLN, "base-wln.json"}};
  for (const auto& [scheme, file] : cases) {
    const auto t = revocation::apply_scheme(s, {scheme, P("A"), P("B")});
    EXPECT_EQ(serialize_state(t.state), read_fixture(file)) << file;
  }
  const auto variant = revocation::apply_scheme(s, {Scheme::SGD, P("A"), P("B")},
                                                {.sgd_descendant_dominance = false});
  EXPECT_EQ(serialize_state(variant.state), read_fixture("base-sgd-target-only.json"));
}

TEST(Serialize, PriorGrantRoundTrips) {
  const auto s = make_state("A", {"A", "B", "C"},
                            {{"A", "B", TT}, {"A", "C", TF}, {"B", "C", TT}});
  const auto applied = revocation::apply_scheme(s, {Scheme::WLN, P("A"), P("B")}).state;
  const std::string text = serialize_state(applied);
  EXPECT_NE(text.find("\"prior\": {\"kind\": \"TF\"}"), std::string::npos) << text;
  EXPECT_TRUE(states_equal(parse_state(text), applied));
}

TEST(Serialize, RoundTripOnRandomStates) {
  std::mt19937_64 rng(404);
  for (int n = 0; n < 500; ++n) {
    auto s = random_state(rng, {});
    if (const auto e = random_positive(rng, s, true)) {
      s = revocation::apply_scheme(s, {Scheme::SLN, e->first, e->second}).state;
    }
    const std::string text = serialize_state(s);
    const auto back = parse_state(text);
    EXPECT_TRUE(states_equal(back, s));
    EXPECT_EQ(back.time(), s.time());
    EXPECT_EQ(serialize_state(back), text);
  }
}

TEST(Parse, OrderAndWhitespaceDoNotMatter) {
  const auto s = parse_state(
      R"({"negative":[],"positive":[{"kind":"TT","to":"B","from":"A"}],)"
      R"("principals":["B","A"],"soa":"A","version":1})");
  EXPECT_EQ(edges(s), (std::set<std::string>{"A->B TT"}));
  EXPECT_EQ(s.time(), 0u);
}

TEST(Parse, Errors) {
  EXPECT_NE(parse_error("{").find("line"), std::string::npos);
  EXPECT_NE(parse_error(read_fixture("unknown-principal.json")).find("positive[0]"),
            std::string::npos);
  const std::string common = R"("soa":"A","principals":["A","B"],"negative":[])";
  EXPECT_NE(parse_error(R"({"version":2,)" + common + R"(,"positive":[]})").find("version"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version":1,)" + common +
                        R"(,"positive":[{"from":"A","to":"B","kind":"TX"}]})")
                .find("positive[0].kind"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version":1,)" + common +
                        R"(,"positive":[{"from":"A","to":"B","kind":"TT"},)"
                        R"({"from":"A","to":"B","kind":"TF"}]})")
                .find("positive[1]"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version":1,)" + common + R"(,"positive":[],"extra":0})")
                .find("extra"),
            std::string::npos);
  parse_error(R"({"version":1,"soa":"Z","principals":["A"],"positive":[],"negative":[]})");
  parse_error(R"({"version":1,"soa":"A","principals":["A","A"],"positive":[],"negative":[]})");
  parse_error(R"({"version":1,"soa":"A","principals":["A"],"positive":[],)"
              R"("negative":[{"from":"A","to":"A"}]})");
}

TEST(Parse, ConnectivityIsNotAParseConcern) {
  const auto s = parse_state(
      R"({"version":1,"soa":"A","principals":["A","E","F"],)"
      R"("positive":[{"from":"E","to":"F","kind":"TF"}],"negative":[]})");
  EXPECT_EQ(s.positive().size(), 1u);
}

TEST(Dot, DashesExactlyTheInactiveEdges) {
  const std::string dot = export_dot(negated_chain());
  EXPECT_EQ(dot, read_fixture("negated-chain.dot"));
  std::size_t dashed = 0;
  for (std::size_t at = dot.find("dashed"); at != std::string::npos;
       at = dot.find("dashed", at + 1)) {
    ++dashed;
  }
  EXPECT_EQ(dashed, 2u);
  EXPECT_NE(dot.find(R"("A" -> "B" [label="TT", style=dashed];)"), std::string::npos);
  EXPECT_NE(dot.find(R"("B" -> "C" [label="TT", style=dashed];)"), std::string::npos);
}

TEST(Dot, WeakLocalNegativeResult) {
  EXPECT_EQ(export_dot(parse_state(read_fixture("base-wln.json"))), read_fixture("base-wln.dot"));
}

TEST(Dot, EmptyState) {
  EXPECT_EQ(export_dot(new_state(P("A"), {P("A")})),
            "digraph authorization {\n"
            "  node [shape=box, style=rounded];\n"
            "  \"A\" [peripheries=2];\n"
            "}\n");
}

TEST(Trace, ParsesEveryOperation) {
  const auto ops = parse_trace(
      R"([{"op":"grant","from":"A","to":"B","kind":"TF"},)"
      R"({"op":"negative","from":"A","to":"B"},)"
      R"({"op":"revoke","scheme":"SGN","from":"A","to":"B"},)"
      R"({"op":"undo","from":"A","to":"B"}])");
  ASSERT_EQ(ops.size(), 4u);
  EXPECT_EQ(describe(ops[0]), "grant A->B TF");
  EXPECT_EQ(describe(ops[1]), "negative A->B");
  EXPECT_EQ(describe(ops[2]), "revoke SGN A->B");
  EXPECT_EQ(describe(ops[3]), "undo A->B");
  EXPECT_EQ(parse_trace(serialize_trace(ops)), ops);
}

TEST(Trace, FixtureReplaysToWeakLocalDelete) {
  auto s = parse_state(read_fixture("empty6.json"));
  for (const auto& op : parse_trace(read_fixture("build-base-then-wld.trace.json"))) {
    s = revocation::apply(s, op).state;
  }
  EXPECT_EQ(serialize_state(s), read_fixture("base-wld.json"));
}

TEST(Trace, Errors) {
  EXPECT_THROW(parse_trace(read_fixture("malformed.trace.json")), Error);
  EXPECT_THROW(parse_trace(R"({"op":"undo"})"), Error);
  EXPECT_THROW(parse_trace(R"([{"op":"grant","from":"A","to":"B"}])"), Error);
  EXPECT_THROW(parse_trace(R"([{"op":"undo","from":"A","to":"B","kind":"TT"}])"), Error);
  EXPECT_THROW(parse_trace(R"([{"op":"revoke","from":"A","to":"B"}])"), Error);
  EXPECT_THROW(parse_trace(R"([{"op":"grant","from":"","to":"B","kind":"TT"}])"), Error);
}

}  // namespace
}  // namespace authz::test
