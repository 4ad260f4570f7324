#pragma once

// Text formats. State and trace documents are UTF-8 JSON; graphs are
// Graphviz DOT. The grammars are documented in docs/formats.md.

#include <string>
#include <string_view>
#include <vector>

#include "authz/model.hpp"
#include "authz/timeline.hpp"

namespace authz::io {

/// Throws Error{Parse} with a "line L, column C" or member-path diagnostic,
/// or the model's own error code (UnknownPrincipal, SelfLoop, ...) wrapped as
/// Parse with the offending member named.
AuthorizationState parse_state(std::string_view text);

/// Canonical document: fixed member order, principals and edges sorted by
/// (from, to), two-space indentation, newline-terminated.
std::string serialize_state(const AuthorizationState& state);

std::vector<OperationRecord> parse_trace(std::string_view text);
std::string serialize_trace(const std::vector<OperationRecord>& trace);

/// Directed graph with the SOA double-bordered, positive edges labelled
/// TT/TF and dashed when inactive, negative edges labelled FF.
std::string export_dot(const AuthorizationState& state);

}  // namespace authz::io
