#include "authz/model.hpp"

#include "authz/timeline.hpp"

namespace authz {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownPrincipal: return "unknown-principal";
    case ErrorCode::SoaNotMember: return "soa-not-member";
    case ErrorCode::EmptyPrincipalId: return "empty-principal-id";
    case ErrorCode::SelfLoop: return "self-loop";
    case ErrorCode::DuplicateAuthorization: return "duplicate-authorization";
    case ErrorCode::ConnectivityBreach: return "connectivity-breach";
    case ErrorCode::Downgrade: return "downgrade";
    case ErrorCode::DuplicateNegative: return "duplicate-negative";
    case ErrorCode::MissingPositive: return "missing-positive";
    case ErrorCode::MissingAuthorization: return "missing-authorization";
    case ErrorCode::NothingToUndo: return "nothing-to-undo";
    case ErrorCode::NotADeleteScheme: return "not-a-delete-scheme";
    case ErrorCode::StateTooLarge: return "state-too-large";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::InvariantBreach: return "invariant-breach";
  }
  return "?";
}

Principal::Principal(std::string id) : id_(std::move(id)) {
  if (id_.empty()) {
    throw Error(ErrorCode::EmptyPrincipalId, "principal id must be non-empty");
  }
}

const char* to_string(PositiveKind kind) {
  return kind == PositiveKind::TT ? "TT" : "TF";
}

std::optional<PositiveKind> parse_kind(std::string_view text) {
  if (text == "TT") return PositiveKind::TT;
  if (text == "TF") return PositiveKind::TF;
  return std::nullopt;
}

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::WLD: return "WLD";
    case Scheme::WGD: return "WGD";
    case Scheme::SLD: return "SLD";
    case Scheme::SGD: return "SGD";
    case Scheme::WLN: return "WLN";
    case Scheme::WGN: return "WGN";
    case Scheme::SLN: return "SLN";
    case Scheme::SGN: return "SGN";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
  for (Scheme s : kAllSchemes) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

AuthorizationState AuthorizationState::create(Principal soa,
                                              std::set<Principal> principals) {
  if (!principals.contains(soa)) {
    throw Error(ErrorCode::SoaNotMember,
                "source of authority '" + soa.id() + "' is not a principal");
  }
  AuthorizationState s;
  s.soa_ = std::move(soa);
  s.principals_ = std::move(principals);
  return s;
}

void AuthorizationState::require_principal(const Principal& p) const {
  if (!principals_.contains(p)) {
    throw Error(ErrorCode::UnknownPrincipal, "unknown principal '" + p.id() + "'");
  }
}

void AuthorizationState::check_edge(const Principal& from,
                                    const Principal& to) const {
  require_principal(from);
  require_principal(to);
  if (from == to) {
    throw Error(ErrorCode::SelfLoop, "self-authorization " + from.id() + "->" +
                                         to.id() + " is not allowed");
  }
}

const PositiveGrant* AuthorizationState::find_positive(
    const Principal& from, const Principal& to) const {
  auto it = positive_.find(Edge{from, to});
  return it == positive_.end() ? nullptr : &it->second;
}

bool AuthorizationState::has_negative(const Principal& from,
                                      const Principal& to) const {
  return negative_.contains(Edge{from, to});
}

std::vector<PositiveAuth> AuthorizationState::positive_auths() const {
  std::vector<PositiveAuth> out;
  out.reserve(positive_.size());
  for (const auto& [edge, g] : positive_) {
    out.push_back({edge.first, edge.second, g.kind, g.label});
  }
  return out;
}

std::vector<NegativeAuth> AuthorizationState::negative_auths() const {
  std::vector<NegativeAuth> out;
  out.reserve(negative_.size());
  for (const auto& [edge, label] : negative_) {
    out.push_back({edge.first, edge.second, label});
  }
  return out;
}

void AuthorizationState::set_positive(const Principal& from, const Principal& to,
                                      PositiveGrant grant) {
  check_edge(from, to);
  if (!grant.label) grant.prior.reset();
  positive_[Edge{from, to}] = std::move(grant);
}

void AuthorizationState::erase_positive(const Principal& from,
                                        const Principal& to) {
  positive_.erase(Edge{from, to});
}

void AuthorizationState::set_negative(const Principal& from, const Principal& to,
                                      std::optional<RevocationLabel> label) {
  check_edge(from, to);
  negative_[Edge{from, to}] = std::move(label);
}

void AuthorizationState::erase_negative(const Principal& from,
                                        const Principal& to) {
  negative_.erase(Edge{from, to});
}

bool states_equal(const AuthorizationState& a, const AuthorizationState& b) {
  return a.soa() == b.soa() && a.principals() == b.principals() &&
         a.positive() == b.positive() && a.negative() == b.negative();
}

std::vector<std::string> validate_wellformed(const AuthorizationState& state) {
  std::vector<std::string> problems;
  if (!state.principals().contains(state.soa())) {
    problems.push_back("soa '" + state.soa().id() + "' not in principals");
  }
  auto check = [&](const Edge& e, const char* sign) {
    for (const Principal* p : {&e.first, &e.second}) {
      if (!state.principals().contains(*p)) {
        problems.push_back(std::string(sign) + " " + e.first.id() + "->" +
                           e.second.id() + " references unknown principal '" +
                           p->id() + "'");
      }
    }
    if (e.first == e.second) {
      problems.push_back(std::string(sign) + " self-loop at " + e.first.id());
    }
  };
  for (const auto& [edge, grant] : state.positive()) {
    check(edge, "positive");
    if (grant.prior && !grant.label) {
      problems.push_back("positive " + edge.first.id() + "->" +
                         edge.second.id() + " has a prior grant but no label");
    }
  }
  for (const auto& [edge, label] : state.negative()) check(edge, "negative");
  return problems;
}

RevocationDelta diff_states(const AuthorizationState& before,
                            const AuthorizationState& after) {
  RevocationDelta d;
  for (const auto& [edge, g] : before.positive()) {
    const PositiveGrant* now = after.find_positive(edge.first, edge.second);
    if (!now || now->kind != g.kind || now->label != g.label) {
      d.deleted_positive.insert({edge.first, edge.second, g.kind, g.label});
    }
  }
  for (const auto& [edge, g] : after.positive()) {
    const PositiveGrant* was = before.find_positive(edge.first, edge.second);
    if (!was || was->kind != g.kind || was->label != g.label) {
      d.issued_positive.insert({edge.first, edge.second, g.kind, g.label});
    }
  }
  for (const auto& [edge, label] : before.negative()) {
    auto it = after.negative().find(edge);
    if (it == after.negative().end() || it->second != label) {
      d.deleted_negative.insert({edge.first, edge.second, label});
    }
  }
  for (const auto& [edge, label] : after.negative()) {
    auto it = before.negative().find(edge);
    if (it == before.negative().end() || it->second != label) {
      d.issued_negative.insert({edge.first, edge.second, label});
    }
  }
  return d;
}

std::string describe(const OperationRecord& op) {
  struct Visitor {
    std::string operator()(const GrantOp& g) const {
      return "grant " + g.grantor.id() + "->" + g.grantee.id() + " " +
             to_string(g.kind);
    }
    std::string operator()(const NegativeOp& n) const {
      return "negative " + n.grantor.id() + "->" + n.grantee.id();
    }
    std::string operator()(const RevokeOp& r) const {
      return std::string("revoke ") + to_string(r.request.scheme) + " " +
             r.request.revoker.id() + "->" + r.request.target.id();
    }
    std::string operator()(const UndoOp& u) const {
      return "undo " + u.grantor.id() + "->" + u.grantee.id();
    }
  };
  return std::visit(Visitor{}, op);
}

void Timeline::append(TimelineStep step) {
  if (step.state.time() != last().time() + 1) {
    throw Error(ErrorCode::InvariantBreach,
                "timeline step has time " + std::to_string(step.state.time()) +
                    ", expected " + std::to_string(last().time() + 1));
  }
  steps_.push_back(std::move(step));
}

}  // namespace authz
