#include "epiq/errors.hpp"

#include <algorithm>

namespace epiq {

std::string to_string(DiagnosticKind kind) {
  switch (kind) {
  case DiagnosticKind::ParseError: return "ParseError";
  case DiagnosticKind::UnfaithfulAction: return "UnfaithfulAction";
  case DiagnosticKind::UnresolvedReference: return "UnresolvedReference";
  }
  return "Unknown";
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += "\n";
    out += to_string(d.kind) + " at " + (d.path.empty() ? "/" : d.path) + ": " + d.message;
  }
  return out;
}

} // namespace

ModelLoadError::ModelLoadError(std::vector<Diagnostic> diagnostics)
    : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool ModelLoadError::has(DiagnosticKind kind) const noexcept {
  return std::any_of(diagnostics_.begin(), diagnostics_.end(),
                     [kind](const Diagnostic& d) { return d.kind == kind; });
}

} // namespace epiq
