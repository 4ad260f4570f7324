#include "authz/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "authz/io.hpp"
#include "authz/revocation.hpp"
#include "authz/semantics.hpp"

namespace authz::cli {

namespace {

namespace fs = std::filesystem;

struct Failure {
  ExitCode code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{ExitCode::ParseError, "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

AuthorizationState load_state(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return io::parse_state(text);
  } catch (const Error& e) {
    throw Failure{ExitCode::ParseError, path + ": " + e.what()};
  }
}

// Writes to stdout when path is empty or "-"; otherwise via a temporary file
// renamed into place, so a failed run never leaves a partial output.
void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Failure{ExitCode::InvariantBreach, "cannot write '" + tmp.string() + "'"};
    f << text;
    if (!f.flush()) {
      throw Failure{ExitCode::InvariantBreach, "cannot write '" + tmp.string() + "'"};
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Failure{ExitCode::InvariantBreach,
                  "cannot rename into '" + path + "': " + ec.message()};
  }
}

std::string summarize(const RevocationDelta& d) {
  std::ostringstream s;
  auto positives = [&](const char* tag, const std::set<PositiveAuth>& set) {
    if (set.empty()) return;
    s << " " << tag << " {";
    bool first = true;
    for (const auto& p : set) {
      s << (first ? "" : ", ") << p.grantor.id() << "->" << p.grantee.id() << " "
        << to_string(p.kind);
      first = false;
    }
    s << "}";
  };
  auto negatives = [&](const char* tag, const std::set<NegativeAuth>& set) {
    if (set.empty()) return;
    s << " " << tag << " {";
    bool first = true;
    for (const auto& n : set) {
      s << (first ? "" : ", ") << "FF " << n.grantor.id() << "->" << n.grantee.id();
      first = false;
    }
    s << "}";
  };
  positives("-", d.deleted_positive);
  negatives("-", d.deleted_negative);
  positives("+", d.issued_positive);
  negatives("+", d.issued_negative);
  if (d.empty()) s << " (no change)";
  return s.str();
}

// Applies one operation and checks that connectivity survives it.
revocation::Transition step(const AuthorizationState& state,
                            const OperationRecord& op, const EngineConfig& config) {
  revocation::Transition t;
  try {
    t = revocation::apply(state, op, config);
  } catch (const Error& e) {
    const ExitCode code = e.code() == ErrorCode::InvariantBreach
                              ? ExitCode::InvariantBreach
                              : ExitCode::PreconditionFailure;
    throw Failure{code, describe(op) + ": " + e.what()};
  }
  if (!validate_wellformed(t.state).empty() ||
      (semantics::validate_connectivity(state).empty() &&
       !semantics::validate_connectivity(t.state).empty())) {
    throw Failure{ExitCode::InvariantBreach,
                  describe(op) + ": result violates a state invariant"};
  }
  return t;
}

Principal principal_arg(const std::string& id) {
  if (id.empty()) throw Failure{ExitCode::ParseError, "principal id must be non-empty"};
  return Principal(id);
}

}  // namespace

ExitCode run(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Delegation and revocation engine for ownership-based access control",
               "authz"};
  app.require_subcommand(1);

  std::string state_path, trace_path, out_path, from, to, scheme_name, kind_name,
      principal;
  bool sgd_variant = false;

  auto* check = app.add_subcommand("check", "Validate the connectivity property");
  check->add_option("state", state_path, "State document")->required();

  auto* rights = app.add_subcommand("rights", "Print access and delegation rights");
  rights->add_option("state", state_path, "State document")->required();
  rights->add_option("principal", principal, "Principal id")->required();

  auto* apply = app.add_subcommand("apply", "Apply a revocation scheme");
  apply->add_option("state", state_path, "State document")->required();
  apply->add_option("--scheme", scheme_name, "WLD|WGD|SLD|SGD|WLN|WGN|SLN|SGN")
      ->required();
  apply->add_option("--from", from, "Revoker")->required();
  apply->add_option("--to", to, "Target")->required();
  apply->add_flag("--sgd-variant", sgd_variant,
                  "Strong global schemes dominate grants into the target only");
  apply->add_option("-o,--output", out_path, "Output state (default: stdout)");

  auto* grant = app.add_subcommand("grant", "Issue a positive authorization");
  grant->add_option("state", state_path, "State document")->required();
  grant->add_option("--from", from, "Grantor")->required();
  grant->add_option("--to", to, "Grantee")->required();
  grant->add_option("--kind", kind_name, "TT (delegable) or TF (access only)")
      ->required();
  grant->add_option("-o,--output", out_path, "Output state (default: stdout)");

  auto* negative = app.add_subcommand("negative", "Issue a negative authorization");
  negative->add_option("state", state_path, "State document")->required();
  negative->add_option("--from", from, "Grantor")->required();
  negative->add_option("--to", to, "Grantee")->required();
  negative->add_option("-o,--output", out_path, "Output state (default: stdout)");

  auto* undo = app.add_subcommand("undo", "Undo a labelled negative revocation");
  undo->add_option("state", state_path, "State document")->required();
  undo->add_option("--from", from, "Revoker of the negative")->required();
  undo->add_option("--to", to, "Target of the negative")->required();
  undo->add_option("-o,--output", out_path, "Output state (default: stdout)");

  auto* trace = app.add_subcommand("trace", "Apply every operation of a trace");
  trace->add_option("state", state_path, "Initial state document")->required();
  trace->add_option("trace", trace_path, "Trace document")->required();
  trace->add_flag("--sgd-variant", sgd_variant,
                  "Strong global schemes dominate grants into the target only");
  trace->add_option("-o,--output", out_path, "Final state (default: stdout)");

  auto* exporter = app.add_subcommand("export", "Export the graph as DOT");
  exporter->add_option("state", state_path, "State document")->required();
  exporter->add_option("-o,--output", out_path, "DOT output (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::Success : ExitCode::ParseError;
  }

  EngineConfig config;
  config.sgd_descendant_dominance = !sgd_variant;

  try {
    if (check->parsed()) {
      const AuthorizationState state = load_state(state_path);
      const auto violations = semantics::validate_connectivity(state);
      for (const auto& v : violations) {
        out << "violation: "
            << (v.sign == semantics::Sign::Positive ? "positive " : "negative ")
            << v.grantor.id() << "->" << v.grantee.id() << ": grantor "
            << v.grantor.id() << " has no rooted delegation chain\n";
      }
      if (violations.empty()) {
        out << "ok\n";
        return ExitCode::Success;
      }
      return ExitCode::ConnectivityViolations;
    }

    if (rights->parsed()) {
      const AuthorizationState state = load_state(state_path);
      const Principal p = principal_arg(principal);
      if (!state.contains(p)) {
        throw Failure{ExitCode::PreconditionFailure, "unknown principal '" + principal + "'"};
      }
      out << "access=" << (semantics::has_access_right(state, p) ? "true" : "false")
          << " delegation="
          << (semantics::has_delegation_right(state, p) ? "true" : "false") << "\n";
      return ExitCode::Success;
    }

    if (exporter->parsed()) {
      write_output(out_path, io::export_dot(load_state(state_path)), out);
      return ExitCode::Success;
    }

    if (trace->parsed()) {
      AuthorizationState state = load_state(state_path);
      std::vector<OperationRecord> ops;
      try {
        ops = io::parse_trace(read_file(trace_path));
      } catch (const Error& e) {
        throw Failure{ExitCode::ParseError, trace_path + ": " + e.what()};
      }
      std::ostream& log = (out_path.empty() || out_path == "-") ? err : out;
      std::size_t n = 0;
      for (const OperationRecord& op : ops) {
        ++n;
        revocation::Transition t = step(state, op, config);
        log << "step " << n << " [t=" << t.state.time() << "] " << describe(op) << ":"
            << summarize(t.delta) << "\n";
        state = std::move(t.state);
      }
      write_output(out_path, io::serialize_state(state), out);
      return ExitCode::Success;
    }

    OperationRecord op;
    if (apply->parsed()) {
      auto scheme = parse_scheme(scheme_name);
      if (!scheme) {
        throw Failure{ExitCode::ParseError, "unknown scheme '" + scheme_name + "'"};
      }
      op = RevokeOp{RevocationRequest{*scheme, principal_arg(from), principal_arg(to)}};
    } else if (grant->parsed()) {
      auto kind = parse_kind(kind_name);
      if (!kind) throw Failure{ExitCode::ParseError, "kind must be TT or TF"};
      op = GrantOp{principal_arg(from), principal_arg(to), *kind};
    } else if (negative->parsed()) {
      op = NegativeOp{principal_arg(from), principal_arg(to)};
    } else {
      op = UndoOp{principal_arg(from), principal_arg(to)};
    }
    const AuthorizationState state = load_state(state_path);
    const revocation::Transition t = step(state, op, config);
    write_output(out_path, io::serialize_state(t.state), out);
    return ExitCode::Success;
  } catch (const Failure& f) {
    err << "authz: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "authz: " << e.what() << "\n";
    return e.code() == ErrorCode::Parse ? ExitCode::ParseError
                                        : ExitCode::InvariantBreach;
  } catch (const std::exception& e) {
    err << "authz: internal error: " << e.what() << "\n";
    return ExitCode::InvariantBreach;
  }
}

}  // namespace authz::cli
