#pragma once

#include <string>
#include <variant>
#include <vector>

#include "authz/model.hpp"

namespace authz {

struct GrantOp {
  Principal grantor;
  Principal grantee;
  PositiveKind kind = PositiveKind::TT;
  friend bool operator==(const GrantOp&, const GrantOp&) = default;
};

struct NegativeOp {
  Principal grantor;
  Principal grantee;
  friend bool operator==(const NegativeOp&, const NegativeOp&) = default;
};

struct RevokeOp {
  RevocationRequest request;
  friend bool operator==(const RevokeOp&, const RevokeOp&) = default;
};

struct UndoOp {
  Principal grantor;
  Principal grantee;
  friend bool operator==(const UndoOp&, const UndoOp&) = default;
};

using OperationRecord = std::variant<GrantOp, NegativeOp, RevokeOp, UndoOp>;

/// e.g. "grant A->B TT", "revoke WLD A->B".
std::string describe(const OperationRecord& op);

struct TimelineStep {
  OperationRecord operation;
  RevocationDelta delta;
  AuthorizationState state;
};

/// Initial state plus the ordered operations applied to it. The state at
/// step n has time initial.time() + n + 1.
class Timeline {
public:
  explicit Timeline(AuthorizationState initial) : initial_(std::move(initial)) {}

  const AuthorizationState& initial() const noexcept { return initial_; }
  const std::vector<TimelineStep>& steps() const noexcept { return steps_; }
  const AuthorizationState& last() const {
    return steps_.empty() ? initial_ : steps_.back().state;
  }

  /// Throws InvariantBreach unless state.time() == last().time() + 1.
  void append(TimelineStep step);

private:
  AuthorizationState initial_;
  std::vector<TimelineStep> steps_;
};

}  // namespace authz
