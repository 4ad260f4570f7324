#include <sstream>

#include "authz/oracle.hpp"
#include "authz/revocation.hpp"

namespace authz::oracle {

namespace {

void describe_delta(std::ostream& out, const RevocationDelta& d) {
  for (const auto& p : d.deleted_positive) {
    out << "  engine lacks " << p.grantor.id() << "->" << p.grantee.id() << " "
        << to_string(p.kind) << "\n";
  }
  for (const auto& p : d.issued_positive) {
    out << "  engine has extra " << p.grantor.id() << "->" << p.grantee.id()
        << " " << to_string(p.kind) << "\n";
  }
  for (const auto& n : d.deleted_negative) {
    out << "  engine lacks FF " << n.grantor.id() << "->" << n.grantee.id() << "\n";
  }
  for (const auto& n : d.issued_negative) {
    out << "  engine has extra FF " << n.grantor.id() << "->" << n.grantee.id()
        << "\n";
  }
}

}  // namespace

EquivalenceResult check_equivalence(const AuthorizationState& state,
                                    const RevocationRequest& request,
                                    const EngineConfig& config) {
  std::optional<AuthorizationState> by_rules;
  std::optional<AuthorizationState> by_engine;
  std::string rules_error, engine_error;
  try {
    by_rules = fixpoint_apply_delete(state, request, config);
  } catch (const Error& e) {
    rules_error = e.what();
  }
  try {
    by_engine = revocation::apply_scheme(state, request, config).state;
  } catch (const Error& e) {
    engine_error = e.what();
  }

  EquivalenceResult result;
  if (!by_rules && !by_engine) return result;
  std::ostringstream report;
  report << to_string(request.scheme) << " " << request.revoker.id() << "->"
         << request.target.id()
         << (config.sgd_descendant_dominance ? "" : " (variant)") << ": ";
  if (!by_rules || !by_engine) {
    result.equivalent = false;
    report << (by_rules ? "engine rejected: " + engine_error
                        : "rule evaluation rejected: " + rules_error);
    result.report = report.str();
    return result;
  }
  if (states_equal(*by_rules, *by_engine)) return result;
  result.equivalent = false;
  report << "states differ\n";
  describe_delta(report, diff_states(*by_rules, *by_engine));
  result.report = report.str();
  return result;
}

}  // namespace authz::oracle
