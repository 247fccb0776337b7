#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epiq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define EPIQ_DEFINE_ERROR(Name)                                                \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
  }

EPIQ_DEFINE_ERROR(GroupError);
EPIQ_DEFINE_ERROR(ActionError);
EPIQ_DEFINE_ERROR(InvalidExperiment);
EPIQ_DEFINE_ERROR(CatalogError);
EPIQ_DEFINE_ERROR(NotASubgroup);
EPIQ_DEFINE_ERROR(NotInvariant);
EPIQ_DEFINE_ERROR(NotInGeneratedSubgroup);
EPIQ_DEFINE_ERROR(WellDefinednessViolation);
EPIQ_DEFINE_ERROR(DegenerateFallback);
EPIQ_DEFINE_ERROR(BasisMismatch);
EPIQ_DEFINE_ERROR(UnknownExperiment);
EPIQ_DEFINE_ERROR(NotAnEffect);
EPIQ_DEFINE_ERROR(RankDeficient);
EPIQ_DEFINE_ERROR(InvalidDensityMatrix);
EPIQ_DEFINE_ERROR(BadPrior);
EPIQ_DEFINE_ERROR(InvalidStatisticalModel);
EPIQ_DEFINE_ERROR(ZeroProbabilityOutcome);
EPIQ_DEFINE_ERROR(InvalidDirection);
EPIQ_DEFINE_ERROR(ActionMismatch);
EPIQ_DEFINE_ERROR(EmptyRestriction);
EPIQ_DEFINE_ERROR(NoOrbitSelected);
EPIQ_DEFINE_ERROR(ModelInvalid);

#undef EPIQ_DEFINE_ERROR

enum class DiagnosticKind { ParseError, UnfaithfulAction, UnresolvedReference };

struct Diagnostic {
  DiagnosticKind kind;
  std::string path; // JSON pointer into the model file, or "line:col" for syntax errors
  std::string message;
};

std::string to_string(DiagnosticKind kind);

/// Raised by the model loader; carries every problem found, each with its field path.
class ModelLoadError : public Error {
public:
  explicit ModelLoadError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }
  bool has(DiagnosticKind kind) const noexcept;

private:
  std::vector<Diagnostic> diagnostics_;
};

} // namespace epiq
