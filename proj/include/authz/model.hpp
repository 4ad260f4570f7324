#pragma once

// Value types of the authorization domain for one fixed (access type, object)
// pair: principals, positive/negative authorizations, revocation labels and
// the authorization state that threads through discrete time.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace authz {

enum class ErrorCode {
  UnknownPrincipal,
  SoaNotMember,
  EmptyPrincipalId,
  SelfLoop,
  DuplicateAuthorization,
  ConnectivityBreach,
  Downgrade,
  DuplicateNegative,
  MissingPositive,
  MissingAuthorization,
  NothingToUndo,
  NotADeleteScheme,
  StateTooLarge,
  Parse,
  InvariantBreach,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

class Principal {
public:
  Principal() = default;
  explicit Principal(std::string id);

  const std::string& id() const noexcept { return id_; }

  friend auto operator<=>(const Principal&, const Principal&) = default;
  friend bool operator==(const Principal&, const Principal&) = default;

private:
  std::string id_;
};

/// Strength order: TT (access plus delegation) > TF (access only).
enum class PositiveKind : std::uint8_t { TF = 0, TT = 1 };

const char* to_string(PositiveKind kind);
std::optional<PositiveKind> parse_kind(std::string_view text);

inline bool stronger(PositiveKind a, PositiveKind b) {
  return static_cast<int>(a) > static_cast<int>(b);
}

/// Identifies one negative revocation: the root negative (grantor, grantee)
/// and the time step at which the operation ran.
struct RevocationLabel {
  Principal root_grantor;
  Principal root_grantee;
  std::uint64_t sequence = 0;

  friend auto operator<=>(const RevocationLabel&,
                          const RevocationLabel&) = default;
  friend bool operator==(const RevocationLabel&,
                         const RevocationLabel&) = default;
};

/// What a positive entry looked like before a labelled reissue upgraded it
/// from TF to TT; undo restores it instead of removing the entry.
struct PriorGrant {
  PositiveKind kind = PositiveKind::TF;
  std::optional<RevocationLabel> label;

  friend bool operator==(const PriorGrant&, const PriorGrant&) = default;
};

/// Payload of the positive map entry for one ordered pair.
struct PositiveGrant {
  PositiveKind kind = PositiveKind::TF;
  std::optional<RevocationLabel> label;
  std::optional<PriorGrant> prior;

  friend bool operator==(const PositiveGrant&, const PositiveGrant&) = default;
};

using Edge = std::pair<Principal, Principal>;

struct PositiveAuth {
  Principal grantor;
  Principal grantee;
  PositiveKind kind = PositiveKind::TF;
  std::optional<RevocationLabel> label;

  friend auto operator<=>(const PositiveAuth&, const PositiveAuth&) = default;
  friend bool operator==(const PositiveAuth&, const PositiveAuth&) = default;
};

struct NegativeAuth {
  Principal grantor;
  Principal grantee;
  std::optional<RevocationLabel> label;

  friend auto operator<=>(const NegativeAuth&, const NegativeAuth&) = default;
  friend bool operator==(const NegativeAuth&, const NegativeAuth&) = default;
};

enum class Scheme : std::uint8_t { WLD, WGD, SLD, SGD, WLN, WGN, SLN, SGN };

inline constexpr Scheme kAllSchemes[] = {Scheme::WLD, Scheme::WGD, Scheme::SLD,
                                         Scheme::SGD, Scheme::WLN, Scheme::WGN,
                                         Scheme::SLN, Scheme::SGN};

const char* to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view text);

inline bool is_delete(Scheme s) {
  return s == Scheme::WLD || s == Scheme::WGD || s == Scheme::SLD ||
         s == Scheme::SGD;
}
inline bool is_local(Scheme s) {
  return s == Scheme::WLD || s == Scheme::SLD || s == Scheme::WLN ||
         s == Scheme::SLN;
}
inline bool is_strong(Scheme s) {
  return s == Scheme::SLD || s == Scheme::SGD || s == Scheme::SLN ||
         s == Scheme::SGN;
}

struct RevocationRequest {
  Scheme scheme = Scheme::WLD;
  Principal revoker;
  Principal target;

  friend bool operator==(const RevocationRequest&,
                         const RevocationRequest&) = default;
};

struct RevocationDelta {
  std::set<PositiveAuth> deleted_positive;
  std::set<NegativeAuth> deleted_negative;
  std::set<PositiveAuth> issued_positive;
  std::set<NegativeAuth> issued_negative;

  bool empty() const {
    return deleted_positive.empty() && deleted_negative.empty() &&
           issued_positive.empty() && issued_negative.empty();
  }

  friend bool operator==(const RevocationDelta&,
                         const RevocationDelta&) = default;
};

struct EngineConfig {
  /// When set, strong global schemes also revoke dependent grants into every
  /// principal that lost a grant during the cascade, not only into the target.
  bool sgd_descendant_dominance = true;
};

/// One authorization specification at one time point.
///
/// The positive map is a partial function on ordered pairs; the negative map
/// holds at most one entry per pair. Mutators validate endpoints and reject
/// self-loops, so every reachable value satisfies the well-formedness
/// invariants checked by validate_wellformed().
class AuthorizationState {
public:
  using PositiveMap = std::map<Edge, PositiveGrant>;
  using NegativeMap = std::map<Edge, std::optional<RevocationLabel>>;

  /// Empty state at time 0; throws SoaNotMember if soa is not a principal.
  static AuthorizationState create(Principal soa, std::set<Principal> principals);

  const Principal& soa() const noexcept { return soa_; }
  const std::set<Principal>& principals() const noexcept { return principals_; }
  const PositiveMap& positive() const noexcept { return positive_; }
  const NegativeMap& negative() const noexcept { return negative_; }
  std::uint64_t time() const noexcept { return time_; }

  bool contains(const Principal& p) const { return principals_.contains(p); }
  void require_principal(const Principal& p) const;

  const PositiveGrant* find_positive(const Principal& from,
                                     const Principal& to) const;
  bool has_negative(const Principal& from, const Principal& to) const;

  std::vector<PositiveAuth> positive_auths() const;
  std::vector<NegativeAuth> negative_auths() const;

  void set_positive(const Principal& from, const Principal& to,
                    PositiveGrant grant);
  void erase_positive(const Principal& from, const Principal& to);
  void set_negative(const Principal& from, const Principal& to,
                    std::optional<RevocationLabel> label);
  void erase_negative(const Principal& from, const Principal& to);
  void set_time(std::uint64_t t) noexcept { time_ = t; }

private:
  void check_edge(const Principal& from, const Principal& to) const;

  Principal soa_;
  std::set<Principal> principals_;
  PositiveMap positive_;
  NegativeMap negative_;
  std::uint64_t time_ = 0;
};

inline AuthorizationState new_state(Principal soa,
                                    std::set<Principal> principals) {
  return AuthorizationState::create(std::move(soa), std::move(principals));
}

/// Structural equality; time is deliberately not compared.
bool states_equal(const AuthorizationState& a, const AuthorizationState& b);

/// Human-readable list of well-formedness problems; empty when well formed.
std::vector<std::string> validate_wellformed(const AuthorizationState& state);

/// Exact changes between two states of the same principal universe.
RevocationDelta diff_states(const AuthorizationState& before,
                            const AuthorizationState& after);

}  // namespace authz
