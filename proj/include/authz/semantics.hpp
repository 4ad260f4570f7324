#pragma once

// Chains, rights and activation over a single AuthorizationState. Every query
// is a worklist least fixpoint of forward reachability from the source of
// authority over TT edges.

#include <set>
#include <vector>

#include "authz/model.hpp"

namespace authz::semantics {

enum class Sign { Positive, Negative };

struct ConnectivityViolation {
  Principal grantor;
  Principal grantee;
  Sign sign = Sign::Positive;

  friend auto operator<=>(const ConnectivityViolation&,
                          const ConnectivityViolation&) = default;
  friend bool operator==(const ConnectivityViolation&,
                         const ConnectivityViolation&) = default;
};

/// Principals with a rooted delegation chain (negatives ignored).
std::set<Principal> rooted_principals(const AuthorizationState& state);

/// Principals with an active rooted delegation chain.
std::set<Principal> active_principals(const AuthorizationState& state);

/// Principals j with delegation rights independent of `avoid`: the source of
/// authority, plus everyone reachable over active TT edges without visiting
/// `avoid`.
std::set<Principal> independent_of(const AuthorizationState& state,
                                   const Principal& avoid);

/// Principals holding the access right.
std::set<Principal> access_holders(const AuthorizationState& state);

bool rooted_chain_exists(const AuthorizationState& state, const Principal& p);
bool active_chain_exists(const AuthorizationState& state, const Principal& p);
bool has_delegation_right(const AuthorizationState& state, const Principal& p);
bool has_access_right(const AuthorizationState& state, const Principal& p);
bool is_independent(const AuthorizationState& state, const Principal& j,
                    const Principal& i);

/// Requires positive(grantor, grantee) to exist (MissingPositive otherwise).
bool is_auth_active(const AuthorizationState& state, const Principal& grantor,
                    const Principal& grantee);

/// One entry per authorization whose grantor has no rooted delegation chain,
/// ordered by (grantor, grantee, sign).
std::vector<ConnectivityViolation> validate_connectivity(
    const AuthorizationState& state);

}  // namespace authz::semantics
