#pragma once

// Grant, negative issuance, the eight revocation schemes and undo, as pure
// state -> state transitions. Every operation advances time by one and
// returns the exact delta; on error it throws authz::Error and produces
// nothing.

#include "authz/model.hpp"
#include "authz/timeline.hpp"

namespace authz::revocation {

struct Transition {
  AuthorizationState state;
  RevocationDelta delta;
};

/// Grantor needs an active rooted delegation chain. Re-granting upgrades TF to
/// TT in place and clears any revocation label; TT -> TF is rejected.
Transition grant(const AuthorizationState& state, const Principal& grantor,
                 const Principal& grantee, PositiveKind kind);

Transition issue_negative(const AuthorizationState& state,
                          const Principal& grantor, const Principal& grantee);

/// Runs one revocation scheme from request.revoker to request.target.
///
/// Delete schemes remove authorizations; negative schemes only add negatives
/// and reissues, all tagged with a RevocationLabel built from (revoker,
/// target, state.time()). Every scheme finishes by dropping authorizations
/// whose grantor no longer has any rooted delegation chain; such grantors
/// hold no rights, so this never changes anyone's access or delegation.
Transition apply_scheme(const AuthorizationState& state,
                        const RevocationRequest& request,
                        const EngineConfig& config = {});

/// Removes the labelled negative (grantor, grantee) together with every
/// authorization carrying the same label; TF -> TT upgrades made under that
/// label are reverted to their prior grant.
Transition undo_negative(const AuthorizationState& state,
                         const Principal& grantor, const Principal& grantee);

Transition apply(const AuthorizationState& state, const OperationRecord& op,
                 const EngineConfig& config = {});

/// Timeline with (op, delta, state') appended; the input is left untouched.
Timeline apply_operation(const Timeline& timeline, const OperationRecord& op,
                         const EngineConfig& config = {});

}  // namespace authz::revocation
