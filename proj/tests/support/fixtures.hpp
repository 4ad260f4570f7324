#pragma once

// Hand-built states from the worked examples, plus small helpers for
// readable assertions.

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include "authz/model.hpp"

namespace authz::test {

inline Principal P(const char* id) { return Principal(id); }

inline constexpr PositiveKind TT = PositiveKind::TT;
inline constexpr PositiveKind TF = PositiveKind::TF;

struct PosSpec {
  const char* from;
  const char* to;
  PositiveKind kind;
};

struct NegSpec {
  const char* from;
  const char* to;
};

inline AuthorizationState make_state(const char* soa,
                                     std::initializer_list<const char*> principals,
                                     std::initializer_list<PosSpec> positive,
                                     std::initializer_list<NegSpec> negative = {},
                                     std::uint64_t time = 0) {
  std::set<Principal> ps;
  for (const char* p : principals) ps.insert(P(p));
  AuthorizationState s = AuthorizationState::create(P(soa), ps);
  for (const auto& e : positive) s.set_positive(P(e.from), P(e.to), {e.kind, {}, {}});
  for (const auto& e : negative) s.set_negative(P(e.from), P(e.to), std::nullopt);
  s.set_time(time);
  return s;
}

// A delegates to B, B gives C access only and delegates to D; E is isolated.
inline AuthorizationState basics() {
  return make_state("A", {"A", "B", "C", "D", "E"},
                    {{"A", "B", TT}, {"B", "C", TF}, {"B", "D", TT}}, {}, 3);
}

// A negates its own grant to B; B's grant to C is inactivated indirectly.
inline AuthorizationState negated_chain() {
  return make_state("A", {"A", "B", "C", "D"},
                    {{"A", "B", TT}, {"A", "C", TT}, {"B", "C", TT}, {"C", "D", TT}},
                    {{"A", "B"}}, 5);
}

// The state every revocation example starts from.
inline AuthorizationState base() {
  return make_state("A", {"A", "B", "C", "D", "E", "F"},
                    {{"A", "B", TT},
                     {"A", "D", TT},
                     {"B", "C", TF},
                     {"B", "E", TT},
                     {"D", "B", TF},
                     {"D", "E", TT}},
                    {{"E", "F"}}, 7);
}

/// "A->B TT", "FF E->F"; labels are ignored.
inline std::set<std::string> edges(const AuthorizationState& s) {
  std::set<std::string> out;
  for (const auto& [e, g] : s.positive()) {
    out.insert(e.first.id() + "->" + e.second.id() + " " + to_string(g.kind));
  }
  for (const auto& [e, l] : s.negative()) {
    out.insert("FF " + e.first.id() + "->" + e.second.id());
  }
  return out;
}

/// Edges that carry a revocation label, in the same notation.
inline std::set<std::string> labelled_edges(const AuthorizationState& s) {
  std::set<std::string> out;
  for (const auto& [e, g] : s.positive()) {
    if (g.label) out.insert(e.first.id() + "->" + e.second.id() + " " + to_string(g.kind));
  }
  for (const auto& [e, l] : s.negative()) {
    if (l) out.insert("FF " + e.first.id() + "->" + e.second.id());
  }
  return out;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(AUTHZ_FIXTURES) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace authz::test
