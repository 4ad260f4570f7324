#include "authz/revocation.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "authz/semantics.hpp"

namespace authz::revocation {

namespace {

using semantics::active_principals;
using semantics::independent_of;
using semantics::rooted_principals;

std::string edge_text(const Principal& a, const Principal& b) {
  return a.id() + "->" + b.id();
}

Transition finish(const AuthorizationState& pre, AuthorizationState post) {
  post.set_time(pre.time() + 1);
  RevocationDelta delta = diff_states(pre, post);
  return {std::move(post), std::move(delta)};
}

void require_active_grantor(const AuthorizationState& state,
                            const Principal& grantor, const char* what) {
  if (!active_principals(state).contains(grantor)) {
    throw Error(ErrorCode::ConnectivityBreach,
                std::string(what) + " by '" + grantor.id() +
                    "' refused: no active rooted delegation chain");
  }
}

struct Emerging {
  std::map<Principal, PositiveKind> positive;  // grantee -> kind
  std::set<Principal> negative;                // grantees
};

// Removes every authorization issued by `p` and reports what was removed.
Emerging delete_emerging(AuthorizationState& work, const Principal& p) {
  Emerging out;
  for (const auto& [edge, grant] : work.positive()) {
    if (edge.first == p) out.positive.emplace(edge.second, grant.kind);
  }
  for (const auto& [edge, label] : work.negative()) {
    if (edge.first == p) out.negative.insert(edge.second);
  }
  for (const auto& [k, kind] : out.positive) work.erase_positive(p, k);
  for (const auto& k : out.negative) work.erase_negative(p, k);
  return out;
}

// Strength merge of a reissued grant into (from, to). A labelled upgrade keeps
// the replaced grant as its prior so undo can restore it.
void merge_positive(AuthorizationState& work, const Principal& from,
                    const Principal& to, PositiveKind kind,
                    const std::optional<RevocationLabel>& label) {
  const PositiveGrant* existing = work.find_positive(from, to);
  if (!existing) {
    work.set_positive(from, to, PositiveGrant{kind, label, std::nullopt});
    return;
  }
  if (!stronger(kind, existing->kind)) return;
  PositiveGrant upgraded{kind, label, std::nullopt};
  if (label) upgraded.prior = PriorGrant{existing->kind, existing->label};
  work.set_positive(from, to, std::move(upgraded));
}

// Reissue for local delete schemes: j's deleted authorizations move to i so
// that every principal keeps the effective grant it received from j. A grant
// that j itself had negated moves only together with its negative, and only
// where that negative cannot disable an existing active grant from i.
void reissue_deleted(AuthorizationState& work, const Principal& i,
                     const Emerging& removed) {
  std::set<Principal> targets;
  for (const auto& [k, kind] : removed.positive) targets.insert(k);
  targets.insert(removed.negative.begin(), removed.negative.end());

  for (const Principal& k : targets) {
    if (k == i) continue;
    auto pos = removed.positive.find(k);
    const bool negated = removed.negative.contains(k);
    const bool i_has_positive = work.find_positive(i, k) != nullptr;
    const bool i_negated = work.has_negative(i, k);

    if (pos != removed.positive.end() && !negated) {
      merge_positive(work, i, k, pos->second, std::nullopt);
    } else if (pos != removed.positive.end()) {
      if (!i_has_positive) {
        work.set_positive(i, k, PositiveGrant{pos->second, {}, {}});
        if (!i_negated) work.set_negative(i, k, std::nullopt);
      } else if (i_negated) {
        merge_positive(work, i, k, pos->second, std::nullopt);
      }
    } else if (!i_has_positive && !i_negated) {
      work.set_negative(i, k, std::nullopt);
    }
  }
}

// Reissue for local negative schemes: every grant from j that was active
// before and is inactive now is issued from i under the operation's label.
void reissue_inactivated(AuthorizationState& work, const AuthorizationState& pre,
                         const std::set<Principal>& active_pre,
                         const Principal& i, const Principal& j,
                         const RevocationLabel& label) {
  if (!active_pre.contains(j)) return;
  if (active_principals(work).contains(j)) return;
  for (auto it = pre.positive().lower_bound(Edge{j, Principal{}});
       it != pre.positive().end() && it->first.first == j; ++it) {
    const Principal& k = it->first.second;
    if (k == i || pre.has_negative(j, k)) continue;
    merge_positive(work, i, k, it->second.kind, label);
  }
}

// Restores connectivity by dropping authorizations of grantors that have no
// rooted delegation chain left. Such grantors have no active chain either,
// so none of the dropped authorizations was in force.
void prune_orphans(AuthorizationState& work) {
  const std::set<Principal> rooted = rooted_principals(work);
  std::vector<Edge> pos, neg;
  for (const auto& [edge, grant] : work.positive()) {
    if (!rooted.contains(edge.first)) pos.push_back(edge);
  }
  for (const auto& [edge, label] : work.negative()) {
    if (!rooted.contains(edge.first)) neg.push_back(edge);
  }
  for (const auto& e : pos) work.erase_positive(e.first, e.second);
  for (const auto& e : neg) work.erase_negative(e.first, e.second);
}

std::vector<Principal> grantors_into(const AuthorizationState& state,
                                     const Principal& w) {
  std::vector<Principal> out;
  for (const auto& [edge, grant] : state.positive()) {
    if (edge.second == w) out.push_back(edge.first);
  }
  return out;
}

void local_delete(AuthorizationState& work, const std::set<Principal>& active_pre,
                  const RevocationRequest& r) {
  if (!active_pre.contains(r.target)) return;
  if (active_principals(work).contains(r.target)) return;
  const Emerging removed = delete_emerging(work, r.target);
  reissue_deleted(work, r.revoker, removed);
}

// Least fixpoint of the global cascade: whoever loses the delegation right
// loses everything they issued; in strong mode, every non-independent grant
// into a principal that lost a grant is deleted as well.
void global_delete(AuthorizationState& work, const std::set<Principal>& active_pre,
                   const std::set<Principal>& independent,
                   const RevocationRequest& r, bool strong, bool descendants) {
  std::set<Principal> hit{r.target};  // grantees of deleted positives
  std::set<Principal> purged;
  std::set<Principal> dominated;
  bool changed = true;
  while (changed) {
    changed = false;
    const std::set<Principal> active = active_principals(work);
    for (const Principal& p : active_pre) {
      if (active.contains(p) || purged.contains(p)) continue;
      purged.insert(p);
      const Emerging removed = delete_emerging(work, p);
      for (const auto& [k, kind] : removed.positive) hit.insert(k);
      changed = true;
    }
    if (!strong) continue;
    const std::set<Principal> targets =
        descendants ? hit : std::set<Principal>{r.target};
    for (const Principal& w : targets) {
      if (!dominated.insert(w).second) continue;
      for (const Principal& z : grantors_into(work, w)) {
        if (independent.contains(z)) continue;
        work.erase_positive(z, w);
        changed = true;
      }
    }
  }
}

void strong_global_negative(AuthorizationState& work,
                            const std::set<Principal>& active_pre,
                            const std::set<Principal>& independent,
                            const RevocationRequest& r,
                            const RevocationLabel& label, bool descendants) {
  std::set<Principal> hit{r.target};  // grantees of inactivated positives
  std::set<Principal> lost;
  std::set<Principal> dominated;
  bool changed = true;
  while (changed) {
    changed = false;
    const std::set<Principal> active = active_principals(work);
    for (const Principal& p : active_pre) {
      if (active.contains(p) || !lost.insert(p).second) continue;
      for (auto it = work.positive().lower_bound(Edge{p, Principal{}});
           it != work.positive().end() && it->first.first == p; ++it) {
        hit.insert(it->first.second);
      }
      changed = true;
    }
    const std::set<Principal> targets =
        descendants ? hit : std::set<Principal>{r.target};
    for (const Principal& w : targets) {
      if (!dominated.insert(w).second) continue;
      for (const Principal& z : grantors_into(work, w)) {
        if (independent.contains(z) || work.has_negative(z, w)) continue;
        work.set_negative(z, w, label);
        changed = true;
      }
    }
  }
}

void validate_request(const AuthorizationState& state,
                      const RevocationRequest& r) {
  state.require_principal(r.revoker);
  state.require_principal(r.target);
  if (r.revoker == r.target) {
    throw Error(ErrorCode::SelfLoop,
                "revoker and target are both '" + r.revoker.id() + "'");
  }
  if (!state.find_positive(r.revoker, r.target)) {
    throw Error(ErrorCode::MissingPositive,
                std::string(to_string(r.scheme)) + ": no positive authorization " +
                    edge_text(r.revoker, r.target));
  }
  if (!is_delete(r.scheme) && state.has_negative(r.revoker, r.target)) {
    throw Error(ErrorCode::DuplicateNegative,
                std::string(to_string(r.scheme)) + ": negative authorization " +
                    edge_text(r.revoker, r.target) + " already present");
  }
}

}  // namespace

Transition grant(const AuthorizationState& state, const Principal& grantor,
                 const Principal& grantee, PositiveKind kind) {
  state.require_principal(grantor);
  state.require_principal(grantee);
  if (grantor == grantee) {
    throw Error(ErrorCode::SelfLoop, "self-grant at '" + grantor.id() + "'");
  }
  require_active_grantor(state, grantor, "grant");
  const PositiveGrant* existing = state.find_positive(grantor, grantee);
  if (existing && stronger(existing->kind, kind)) {
    throw Error(ErrorCode::Downgrade,
                "grant " + edge_text(grantor, grantee) +
                    " TF would downgrade an existing TT; revoke instead");
  }
  AuthorizationState work = state;
  work.set_positive(grantor, grantee, PositiveGrant{kind, {}, {}});
  return finish(state, std::move(work));
}

Transition issue_negative(const AuthorizationState& state,
                          const Principal& grantor, const Principal& grantee) {
  state.require_principal(grantor);
  state.require_principal(grantee);
  if (grantor == grantee) {
    throw Error(ErrorCode::SelfLoop, "self-negative at '" + grantor.id() + "'");
  }
  require_active_grantor(state, grantor, "negative authorization");
  if (state.has_negative(grantor, grantee)) {
    throw Error(ErrorCode::DuplicateNegative,
                "negative authorization " + edge_text(grantor, grantee) +
                    " already present");
  }
  AuthorizationState work = state;
  work.set_negative(grantor, grantee, std::nullopt);
  return finish(state, std::move(work));
}

Transition apply_scheme(const AuthorizationState& state,
                        const RevocationRequest& request,
                        const EngineConfig& config) {
  validate_request(state, request);
  const Principal& i = request.revoker;
  const Principal& j = request.target;
  const std::set<Principal> active_pre = active_principals(state);
  const std::set<Principal> independent =
      is_strong(request.scheme) ? independent_of(state, i) : std::set<Principal>{};
  const RevocationLabel label{i, j, state.time()};

  AuthorizationState work = state;
  switch (request.scheme) {
    case Scheme::WLD:
      work.erase_positive(i, j);
      local_delete(work, active_pre, request);
      break;
    case Scheme::SLD:
      work.erase_positive(i, j);
      for (const Principal& k : grantors_into(state, j)) {
        if (!independent.contains(k)) work.erase_positive(k, j);
      }
      local_delete(work, active_pre, request);
      break;
    case Scheme::WGD:
      work.erase_positive(i, j);
      global_delete(work, active_pre, independent, request, false, false);
      break;
    case Scheme::SGD:
      work.erase_positive(i, j);
      global_delete(work, active_pre, independent, request, true,
                    config.sgd_descendant_dominance);
      break;
    case Scheme::WLN:
      work.set_negative(i, j, label);
      reissue_inactivated(work, state, active_pre, i, j, label);
      break;
    case Scheme::WGN:
      work.set_negative(i, j, label);
      break;
    case Scheme::SLN:
      work.set_negative(i, j, label);
      for (const Principal& k : grantors_into(state, j)) {
        if (k == i || independent.contains(k) || work.has_negative(k, j)) {
          continue;
        }
        work.set_negative(k, j, label);
      }
      reissue_inactivated(work, state, active_pre, i, j, label);
      break;
    case Scheme::SGN:
      work.set_negative(i, j, label);
      strong_global_negative(work, active_pre, independent, request, label,
                             config.sgd_descendant_dominance);
      break;
  }
  prune_orphans(work);
  return finish(state, std::move(work));
}

Transition undo_negative(const AuthorizationState& state,
                         const Principal& grantor, const Principal& grantee) {
  state.require_principal(grantor);
  state.require_principal(grantee);
  auto it = state.negative().find(Edge{grantor, grantee});
  if (it == state.negative().end() || !it->second ||
      it->second->root_grantor != grantor || it->second->root_grantee != grantee) {
    throw Error(ErrorCode::NothingToUndo,
                "no labelled negative revocation " + edge_text(grantor, grantee) +
                    " to undo");
  }
  const RevocationLabel label = *it->second;

  AuthorizationState work = state;
  for (const auto& [edge, g] : state.positive()) {
    if (g.label == label) {
      if (g.prior) {
        work.set_positive(edge.first, edge.second,
                          PositiveGrant{g.prior->kind, g.prior->label, {}});
      } else {
        work.erase_positive(edge.first, edge.second);
      }
    } else if (g.prior && g.prior->label == label) {
      work.set_positive(edge.first, edge.second,
                        PositiveGrant{g.kind, g.label, std::nullopt});
    }
  }
  for (const auto& [edge, l] : state.negative()) {
    if (l == label) work.erase_negative(edge.first, edge.second);
  }
  prune_orphans(work);
  return finish(state, std::move(work));
}

Transition apply(const AuthorizationState& state, const OperationRecord& op,
                 const EngineConfig& config) {
  struct Visitor {
    const AuthorizationState& state;
    const EngineConfig& config;
    Transition operator()(const GrantOp& g) const {
      return grant(state, g.grantor, g.grantee, g.kind);
    }
    Transition operator()(const NegativeOp& n) const {
      return issue_negative(state, n.grantor, n.grantee);
    }
    Transition operator()(const RevokeOp& r) const {
      return apply_scheme(state, r.request, config);
    }
    Transition operator()(const UndoOp& u) const {
      return undo_negative(state, u.grantor, u.grantee);
    }
  };
  return std::visit(Visitor{state, config}, op);
}

Timeline apply_operation(const Timeline& timeline, const OperationRecord& op,
                         const EngineConfig& config) {
  Transition t = apply(timeline.last(), op, config);
  Timeline next = timeline;
  next.append(TimelineStep{op, std::move(t.delta), std::move(t.state)});
  return next;
}

}  // namespace authz::revocation
