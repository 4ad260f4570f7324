#include "authz/io.hpp"

#include <set>
#include <sstream>

#include <json.hpp>

#include "authz/semantics.hpp"

namespace authz::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Parse, where + ": " + what);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t k = 0; k + 1 < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": malformed JSON");
  }
}

void require_members(const json& obj, const std::string& where,
                     std::initializer_list<const char*> required,
                     std::initializer_list<const char*> optional) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const char* key : required) {
    if (!obj.contains(key)) fail(where, std::string("missing member \"") + key + "\"");
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) fail(where, "unexpected member \"" + key + "\"");
  }
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

Principal get_principal(const json& obj, const char* key, const std::string& where) {
  std::string id = get_string(obj, key, where);
  if (id.empty()) fail(where + "." + key, "principal id must be non-empty");
  return Principal(std::move(id));
}

RevocationLabel parse_label(const json& v, const std::string& where) {
  require_members(v, where, {"from", "to", "seq"}, {});
  const json& seq = v.at("seq");
  if (!seq.is_number_unsigned()) fail(where + ".seq", "expected a non-negative integer");
  return {get_principal(v, "from", where), get_principal(v, "to", where),
          seq.get<std::uint64_t>()};
}

PositiveKind get_kind(const json& obj, const std::string& where) {
  auto kind = parse_kind(get_string(obj, "kind", where));
  if (!kind) fail(where + ".kind", "expected \"TT\" or \"TF\"");
  return *kind;
}

// Replays a model error as a parse error pointing at the member.
template <typename F>
void at_member(const std::string& where, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    fail(where, e.what());
  }
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string label_text(const RevocationLabel& l) {
  return "{\"from\": " + quoted(l.root_grantor.id()) + ", \"to\": " +
         quoted(l.root_grantee.id()) + ", \"seq\": " + std::to_string(l.sequence) + "}";
}

std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

AuthorizationState parse_state(std::string_view text) {
  const json doc = parse_json(text);
  require_members(doc, "document",
                  {"version", "soa", "principals", "positive", "negative"},
                  {"time"});
  if (doc["version"] != 1) fail("version", "only version 1 is supported");

  const json& principals = doc["principals"];
  if (!principals.is_array()) fail("principals", "expected an array");
  std::set<Principal> members;
  for (std::size_t k = 0; k < principals.size(); ++k) {
    const std::string where = "principals[" + std::to_string(k) + "]";
    if (!principals[k].is_string() || principals[k].get<std::string>().empty()) {
      fail(where, "expected a non-empty string");
    }
    if (!members.insert(Principal(principals[k].get<std::string>())).second) {
      fail(where, "duplicate principal \"" + principals[k].get<std::string>() + "\"");
    }
  }
  const Principal soa = get_principal(doc, "soa", "document");
  std::optional<AuthorizationState> state;
  at_member("soa", [&] { state = AuthorizationState::create(soa, members); });

  if (doc.contains("time")) {
    if (!doc["time"].is_number_unsigned()) fail("time", "expected a non-negative integer");
    state->set_time(doc["time"].get<std::uint64_t>());
  }

  const json& positive = doc["positive"];
  if (!positive.is_array()) fail("positive", "expected an array");
  for (std::size_t k = 0; k < positive.size(); ++k) {
    const std::string where = "positive[" + std::to_string(k) + "]";
    const json& e = positive[k];
    require_members(e, where, {"from", "to", "kind"}, {"label", "prior"});
    const Principal from = get_principal(e, "from", where);
    const Principal to = get_principal(e, "to", where);
    PositiveGrant grant{get_kind(e, where), {}, {}};
    if (e.contains("label")) grant.label = parse_label(e["label"], where + ".label");
    if (e.contains("prior")) {
      if (!grant.label) fail(where + ".prior", "a prior grant requires a label");
      const json& p = e["prior"];
      require_members(p, where + ".prior", {"kind"}, {"label"});
      grant.prior = PriorGrant{get_kind(p, where + ".prior"), {}};
      if (p.contains("label")) {
        grant.prior->label = parse_label(p["label"], where + ".prior.label");
      }
    }
    if (state->find_positive(from, to)) {
      fail(where, "duplicate positive authorization " + from.id() + "->" + to.id());
    }
    at_member(where, [&] { state->set_positive(from, to, grant); });
  }

  const json& negative = doc["negative"];
  if (!negative.is_array()) fail("negative", "expected an array");
  for (std::size_t k = 0; k < negative.size(); ++k) {
    const std::string where = "negative[" + std::to_string(k) + "]";
    const json& e = negative[k];
    require_members(e, where, {"from", "to"}, {"label"});
    const Principal from = get_principal(e, "from", where);
    const Principal to = get_principal(e, "to", where);
    std::optional<RevocationLabel> label;
    if (e.contains("label")) label = parse_label(e["label"], where + ".label");
    if (state->has_negative(from, to)) {
      fail(where, "duplicate negative authorization " + from.id() + "->" + to.id());
    }
    at_member(where, [&] { state->set_negative(from, to, label); });
  }
  return std::move(*state);
}

std::string serialize_state(const AuthorizationState& state) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"version\": 1,\n";
  out << "  \"soa\": " << quoted(state.soa().id()) << ",\n";
  out << "  \"time\": " << state.time() << ",\n";
  out << "  \"principals\": [";
  bool first = true;
  for (const Principal& p : state.principals()) {
    out << (first ? "" : ", ") << quoted(p.id());
    first = false;
  }
  out << "],\n";

  out << "  \"positive\": [";
  first = true;
  for (const auto& [edge, g] : state.positive()) {
    out << (first ? "\n" : ",\n") << "    {\"from\": " << quoted(edge.first.id())
        << ", \"to\": " << quoted(edge.second.id()) << ", \"kind\": \""
        << to_string(g.kind) << "\"";
    if (g.label) out << ", \"label\": " << label_text(*g.label);
    if (g.prior) {
      out << ", \"prior\": {\"kind\": \"" << to_string(g.prior->kind) << "\"";
      if (g.prior->label) out << ", \"label\": " << label_text(*g.prior->label);
      out << "}";
    }
    out << "}";
    first = false;
  }
  out << (first ? "],\n" : "\n  ],\n");

  out << "  \"negative\": [";
  first = true;
  for (const auto& [edge, label] : state.negative()) {
    out << (first ? "\n" : ",\n") << "    {\"from\": " << quoted(edge.first.id())
        << ", \"to\": " << quoted(edge.second.id());
    if (label) out << ", \"label\": " << label_text(*label);
    out << "}";
    first = false;
  }
  out << (first ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

std::vector<OperationRecord> parse_trace(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_array()) fail("trace", "expected an array of operations");
  std::vector<OperationRecord> ops;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string where = "trace[" + std::to_string(k) + "]";
    const json& e = doc[k];
    if (!e.is_object()) fail(where, "expected an object");
    if (!e.contains("op")) fail(where, "missing member \"op\"");
    const std::string op = get_string(e, "op", where);
    if (op == "grant") {
      require_members(e, where, {"op", "from", "to", "kind"}, {});
      ops.emplace_back(GrantOp{get_principal(e, "from", where),
                               get_principal(e, "to", where), get_kind(e, where)});
    } else if (op == "negative") {
      require_members(e, where, {"op", "from", "to"}, {});
      ops.emplace_back(
          NegativeOp{get_principal(e, "from", where), get_principal(e, "to", where)});
    } else if (op == "revoke") {
      require_members(e, where, {"op", "scheme", "from", "to"}, {});
      const std::string name = get_string(e, "scheme", where);
      auto scheme = parse_scheme(name);
      if (!scheme) fail(where + ".scheme", "unknown scheme \"" + name + "\"");
      ops.emplace_back(RevokeOp{RevocationRequest{
          *scheme, get_principal(e, "from", where), get_principal(e, "to", where)}});
    } else if (op == "undo") {
      require_members(e, where, {"op", "from", "to"}, {});
      ops.emplace_back(
          UndoOp{get_principal(e, "from", where), get_principal(e, "to", where)});
    } else {
      fail(where + ".op", "unknown operation \"" + op + "\"");
    }
  }
  return ops;
}

std::string serialize_trace(const std::vector<OperationRecord>& trace) {
  struct Entry {
    std::string operator()(const GrantOp& g) const {
      return "{\"op\": \"grant\", \"from\": " + quoted(g.grantor.id()) +
             ", \"to\": " + quoted(g.grantee.id()) + ", \"kind\": \"" +
             to_string(g.kind) + "\"}";
    }
    std::string operator()(const NegativeOp& n) const {
      return "{\"op\": \"negative\", \"from\": " + quoted(n.grantor.id()) +
             ", \"to\": " + quoted(n.grantee.id()) + "}";
    }
    std::string operator()(const RevokeOp& r) const {
      return std::string("{\"op\": \"revoke\", \"scheme\": \"") +
             to_string(r.request.scheme) + "\", \"from\": " +
             quoted(r.request.revoker.id()) + ", \"to\": " +
             quoted(r.request.target.id()) + "}";
    }
    std::string operator()(const UndoOp& u) const {
      return "{\"op\": \"undo\", \"from\": " + quoted(u.grantor.id()) +
             ", \"to\": " + quoted(u.grantee.id()) + "}";
    }
  };
  if (trace.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out += "  " + std::visit(Entry{}, trace[k]) + (k + 1 < trace.size() ? ",\n" : "\n");
  }
  return out + "]\n";
}

std::string export_dot(const AuthorizationState& state) {
  const std::set<Principal> active = semantics::active_principals(state);
  std::ostringstream out;
  out << "digraph authorization {\n";
  out << "  node [shape=box, style=rounded];\n";
  for (const Principal& p : state.principals()) {
    out << "  " << dot_id(p.id());
    if (p == state.soa()) out << " [peripheries=2]";
    out << ";\n";
  }
  // (from, to) order; the positive edge of a pair precedes its negative.
  auto pos = state.positive().begin();
  auto neg = state.negative().begin();
  while (pos != state.positive().end() || neg != state.negative().end()) {
    const bool take_pos = neg == state.negative().end() ||
                          (pos != state.positive().end() && pos->first <= neg->first);
    if (take_pos) {
      const auto& [from, to] = pos->first;
      const bool live = active.contains(from) && !state.has_negative(from, to);
      out << "  " << dot_id(from.id()) << " -> " << dot_id(to.id()) << " [label=\""
          << to_string(pos->second.kind) << "\"" << (live ? "" : ", style=dashed")
          << "];\n";
      ++pos;
    } else {
      const auto& [from, to] = neg->first;
      out << "  " << dot_id(from.id()) << " -> " << dot_id(to.id())
          << " [label=\"FF\"];\n";
      ++neg;
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace authz::io
