#include "authz/oracle.hpp"

#include <cstdint>
#include <functional>
#include <map>

namespace authz::oracle {

namespace {

// Dense view of a state: principals indexed in sorted order.
struct Matrix {
  std::vector<Principal> names;
  std::map<Principal, std::size_t> index;
  std::size_t soa = 0;
  std::size_t n = 0;
  // 0 = no positive, 1 = TF, 2 = TT
  std::vector<std::vector<std::uint8_t>> pos;
  std::vector<std::vector<bool>> neg;

  explicit Matrix(const AuthorizationState& s)
      : names(s.principals().begin(), s.principals().end()), n(names.size()) {
    for (std::size_t k = 0; k < n; ++k) index[names[k]] = k;
    soa = index.at(s.soa());
    pos.assign(n, std::vector<std::uint8_t>(n, 0));
    neg.assign(n, std::vector<bool>(n, false));
    for (const auto& [e, g] : s.positive()) {
      pos[index.at(e.first)][index.at(e.second)] =
          g.kind == PositiveKind::TT ? 2 : 1;
    }
    for (const auto& [e, l] : s.negative()) {
      neg[index.at(e.first)][index.at(e.second)] = true;
    }
  }
};

using Grid = std::vector<std::vector<std::uint8_t>>;
using Flags = std::vector<bool>;

// active_chain(SOA). active_chain(y) <- active_chain(x) & TT(x,y) & ~FF(x,y).
// Evaluated by simultaneous (Jacobi) rounds until nothing changes.
Flags chain_holders(std::size_t n, std::size_t soa, const Grid& pos,
                    const std::vector<std::vector<bool>>& neg, bool active,
                    std::optional<std::size_t> avoid = std::nullopt) {
  Flags holds(n, false);
  if (avoid && *avoid == soa) {
    holds[soa] = true;
    return holds;
  }
  holds[soa] = true;
  for (bool changed = true; changed;) {
    changed = false;
    Flags next = holds;
    for (std::size_t x = 0; x < n; ++x) {
      if (!holds[x]) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (pos[x][y] != 2 || (active && neg[x][y])) continue;
        if (avoid && y == *avoid) continue;
        if (!next[y]) {
          next[y] = true;
          changed = true;
        }
      }
    }
    holds = std::move(next);
  }
  return holds;
}

void check_request(const AuthorizationState& state, const RevocationRequest& r) {
  if (!is_delete(r.scheme)) {
    throw Error(ErrorCode::NotADeleteScheme,
                std::string(to_string(r.scheme)) + " is not a delete scheme");
  }
  for (const Principal* p : {&r.revoker, &r.target}) {
    if (!state.contains(*p)) {
      throw Error(ErrorCode::UnknownPrincipal, "unknown principal '" + p->id() + "'");
    }
  }
  if (r.revoker == r.target) {
    throw Error(ErrorCode::SelfLoop, "revoker equals target");
  }
  if (!state.positive().contains(Edge{r.revoker, r.target})) {
    throw Error(ErrorCode::MissingPositive, "no positive authorization to revoke");
  }
}

}  // namespace

std::set<Chain> enumerate_chains(const AuthorizationState& state,
                                 const Principal& p, ChainMode mode,
                                 const std::optional<Principal>& avoid) {
  if (state.principals().size() > kMaxEnumerationPrincipals) {
    throw Error(ErrorCode::StateTooLarge,
                "chain enumeration is limited to " +
                    std::to_string(kMaxEnumerationPrincipals) + " principals");
  }
  if (!state.contains(p)) {
    throw Error(ErrorCode::UnknownPrincipal, "unknown principal '" + p.id() + "'");
  }
  const Matrix m(state);
  const std::size_t target = m.index.at(p);
  std::set<Chain> out;
  std::vector<std::size_t> path{m.soa};
  std::vector<bool> on_path(m.n, false);
  on_path[m.soa] = true;

  std::function<void(std::size_t)> dfs = [&](std::size_t at) {
    if (at == target) {
      Chain c;
      for (std::size_t k : path) c.push_back(m.names[k]);
      bool excluded = false;
      if (avoid) {
        for (const Principal& q : c) excluded = excluded || q == *avoid;
      }
      if (!excluded) out.insert(std::move(c));
      return;
    }
    for (std::size_t y = 0; y < m.n; ++y) {
      if (on_path[y] || m.pos[at][y] != 2) continue;
      if (mode == ChainMode::Active && m.neg[at][y]) continue;
      on_path[y] = true;
      path.push_back(y);
      dfs(y);
      path.pop_back();
      on_path[y] = false;
    }
  };
  dfs(m.soa);
  return out;
}

AuthorizationState fixpoint_apply_delete(const AuthorizationState& state,
                                         const RevocationRequest& request,
                                         const EngineConfig& config) {
  check_request(state, request);
  const Matrix m(state);
  const std::size_t n = m.n;
  const std::size_t i = m.index.at(request.revoker);
  const std::size_t j = m.index.at(request.target);
  const Scheme s = request.scheme;
  const bool local = s == Scheme::WLD || s == Scheme::SLD;

  const Flags active_before = chain_holders(n, m.soa, m.pos, m.neg, true);
  // ind(z, i): z is the SOA, or z != i is reachable over active TT edges
  // without passing through i.
  const Flags reach_avoiding_i = chain_holders(n, m.soa, m.pos, m.neg, true, i);
  auto ind = [&](std::size_t z) {
    return z == m.soa || (z != i && reach_avoiding_i[z]);
  };

  std::vector<std::vector<bool>> del(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> del_neg(n, std::vector<bool>(n, false));
  Flags lost(n, false);

  for (bool changed = true; changed;) {
    // The state after the deletions derived so far.
    Grid pos_after = m.pos;
    std::vector<std::vector<bool>> neg_after = m.neg;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (del[x][y]) pos_after[x][y] = 0;
        if (del_neg[x][y]) neg_after[x][y] = false;
      }
    }
    const Flags active_after = chain_holders(n, m.soa, pos_after, neg_after, true);
    Flags lost_now(n, false);
    for (std::size_t p = 0; p < n; ++p) {
      const bool in_scope = !local || p == j;
      lost_now[p] = in_scope && active_before[p] && !active_after[p];
    }
    Flags deleted_into(n, false);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (del[x][y]) deleted_into[y] = true;
      }
    }

    auto next = del;
    auto next_neg = del_neg;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (m.neg[x][y] && lost_now[x]) next_neg[x][y] = true;
        if (m.pos[x][y] == 0) continue;
        // delete(i,j) <- rs(i,j).
        if (x == i && y == j) next[x][y] = true;
        // delete(x,y) <- pos_auth(x,y) & x lost its delegation right.
        if (lost_now[x]) next[x][y] = true;
        // delete(k,j) <- rs(SLD,i,j) & pos_auth(k,j) & ~ind(k,i).
        if (s == Scheme::SLD && y == j && !ind(x)) next[x][y] = true;
        // delete(z,w) <- rs(SGD,i,j) & delete(p,w) & pos_auth(z,w) & ~ind(z,i).
        if (s == Scheme::SGD && !ind(x)) {
          const bool into = config.sgd_descendant_dominance ? deleted_into[y]
                                                            : y == j;
          if (into) next[x][y] = true;
        }
      }
    }
    changed = next != del || next_neg != del_neg || lost_now != lost;
    del = std::move(next);
    del_neg = std::move(next_neg);
    lost = std::move(lost_now);
  }

  Grid post = m.pos;
  std::vector<std::vector<bool>> post_neg = m.neg;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (del[x][y]) post[x][y] = 0;
      if (del_neg[x][y]) post_neg[x][y] = false;
    }
  }
  // Labels and priors of untouched entries are carried over; reissued and
  // upgraded entries carry none.
  std::vector<std::vector<bool>> fresh(n, std::vector<bool>(n, false));

  // new(i,k) <- local & j lost & auth(j,k), keeping k's effective grant.
  if (local && lost[j]) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const std::uint8_t was = del[j][k] ? m.pos[j][k] : 0;
      const bool was_negated = del_neg[j][k];
      if (was == 0 && !was_negated) continue;
      const bool i_pos = post[i][k] != 0;
      const bool i_neg = post_neg[i][k];
      if (was != 0 && !was_negated) {
        if (was > post[i][k]) {
          post[i][k] = was;
          fresh[i][k] = true;
        }
      } else if (was != 0) {
        if (!i_pos) {
          post[i][k] = was;
          fresh[i][k] = true;
          post_neg[i][k] = true;
        } else if (i_neg && was > post[i][k]) {
          post[i][k] = was;
          fresh[i][k] = true;
        }
      } else if (!i_pos && !i_neg) {
        post_neg[i][k] = true;
      }
    }
  }

  // Connectivity repair: grantors without any rooted chain issue nothing.
  const Flags rooted = chain_holders(n, m.soa, post, post_neg, false);

  AuthorizationState out = AuthorizationState::create(state.soa(), state.principals());
  for (std::size_t x = 0; x < n; ++x) {
    if (!rooted[x]) continue;
    for (std::size_t y = 0; y < n; ++y) {
      const Principal& a = m.names[x];
      const Principal& b = m.names[y];
      if (post[x][y] != 0) {
        const PositiveKind kind = post[x][y] == 2 ? PositiveKind::TT : PositiveKind::TF;
        PositiveGrant g{kind, {}, {}};
        if (!fresh[x][y]) g = state.positive().at(Edge{a, b});
        out.set_positive(a, b, g);
      }
      if (post_neg[x][y]) {
        auto it = state.negative().find(Edge{a, b});
        out.set_negative(a, b, it == state.negative().end() ? std::nullopt : it->second);
      }
    }
  }
  out.set_time(state.time() + 1);
  return out;
}

}  // namespace authz::oracle
