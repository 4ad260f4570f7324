#include "authz/semantics.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace authz::semantics {

namespace {

// Least fixpoint of forward reachability from the SOA over TT edges. With
// `active_only`, negated pairs are not traversed; `avoid` is never entered.
std::set<Principal> reach(const AuthorizationState& state, bool active_only,
                          const std::optional<Principal>& avoid) {
  std::set<Principal> seen{state.soa()};
  if (avoid && *avoid == state.soa()) return seen;

  std::deque<Principal> work{state.soa()};
  const auto& positive = state.positive();
  while (!work.empty()) {
    Principal x = std::move(work.front());
    work.pop_front();
    for (auto it = positive.lower_bound(Edge{x, Principal{}});
         it != positive.end() && it->first.first == x; ++it) {
      const Principal& y = it->first.second;
      if (it->second.kind != PositiveKind::TT) continue;
      if (active_only && state.has_negative(x, y)) continue;
      if (avoid && y == *avoid) continue;
      if (seen.insert(y).second) work.push_back(y);
    }
  }
  return seen;
}

}  // namespace

std::set<Principal> rooted_principals(const AuthorizationState& state) {
  return reach(state, false, std::nullopt);
}

std::set<Principal> active_principals(const AuthorizationState& state) {
  return reach(state, true, std::nullopt);
}

std::set<Principal> independent_of(const AuthorizationState& state,
                                   const Principal& avoid) {
  return reach(state, true, avoid);
}

std::set<Principal> access_holders(const AuthorizationState& state) {
  std::set<Principal> holders = active_principals(state);
  const std::set<Principal> active = holders;
  for (const auto& [edge, grant] : state.positive()) {
    if (grant.kind == PositiveKind::TF && active.contains(edge.first) &&
        !state.has_negative(edge.first, edge.second)) {
      holders.insert(edge.second);
    }
  }
  return holders;
}

bool rooted_chain_exists(const AuthorizationState& state, const Principal& p) {
  state.require_principal(p);
  return rooted_principals(state).contains(p);
}

bool active_chain_exists(const AuthorizationState& state, const Principal& p) {
  state.require_principal(p);
  return active_principals(state).contains(p);
}

bool has_delegation_right(const AuthorizationState& state, const Principal& p) {
  return active_chain_exists(state, p);
}

bool has_access_right(const AuthorizationState& state, const Principal& p) {
  state.require_principal(p);
  return access_holders(state).contains(p);
}

bool is_independent(const AuthorizationState& state, const Principal& j,
                    const Principal& i) {
  state.require_principal(j);
  state.require_principal(i);
  return independent_of(state, i).contains(j);
}

bool is_auth_active(const AuthorizationState& state, const Principal& grantor,
                    const Principal& grantee) {
  state.require_principal(grantor);
  state.require_principal(grantee);
  if (!state.find_positive(grantor, grantee)) {
    throw Error(ErrorCode::MissingPositive, "no positive authorization " +
                                                grantor.id() + "->" +
                                                grantee.id());
  }
  return !state.has_negative(grantor, grantee) &&
         active_principals(state).contains(grantor);
}

std::vector<ConnectivityViolation> validate_connectivity(
    const AuthorizationState& state) {
  const std::set<Principal> rooted = rooted_principals(state);
  std::vector<ConnectivityViolation> out;
  for (const auto& [edge, grant] : state.positive()) {
    if (!rooted.contains(edge.first)) {
      out.push_back({edge.first, edge.second, Sign::Positive});
    }
  }
  for (const auto& [edge, label] : state.negative()) {
    if (!rooted.contains(edge.first)) {
      out.push_back({edge.first, edge.second, Sign::Negative});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace authz::semantics
