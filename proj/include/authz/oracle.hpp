#pragma once

// Reference implementations for cross-checking the engine. Nothing here calls
// into authz::semantics or authz::revocation: chains are found by explicit
// simple-path enumeration, and delete schemes are evaluated as a simultaneous
// fixpoint of rule sets over adjacency matrices.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "authz/model.hpp"

namespace authz::oracle {

inline constexpr std::size_t kMaxEnumerationPrincipals = 12;

using Chain = std::vector<Principal>;

enum class ChainMode { Plain, Active };

/// All simple chains from the SOA to p over TT edges (Active: un-negated TT
/// edges), excluding chains that contain `avoid`. Throws StateTooLarge above
/// kMaxEnumerationPrincipals.
std::set<Chain> enumerate_chains(const AuthorizationState& state,
                                 const Principal& p, ChainMode mode,
                                 const std::optional<Principal>& avoid = {});

/// Result of a delete scheme under the rule-based evaluation. Throws
/// NotADeleteScheme for negative schemes and the same precondition errors as
/// the engine for malformed requests.
AuthorizationState fixpoint_apply_delete(const AuthorizationState& state,
                                         const RevocationRequest& request,
                                         const EngineConfig& config = {});

struct EquivalenceResult {
  bool equivalent = true;
  std::string report;  // empty when equivalent

  explicit operator bool() const noexcept { return equivalent; }
};

/// Runs both evaluators. Vacuously equivalent when both reject the request.
EquivalenceResult check_equivalence(const AuthorizationState& state,
                                    const RevocationRequest& request,
                                    const EngineConfig& config = {});

}  // namespace authz::oracle
