#pragma once

#include <stdexcept>
#include <string>

namespace conereg {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define CONEREG_DECLARE_ERROR(Name)                                            \
  class Name : public Error                                                    \
  {                                                                            \
  public:                                                                      \
    explicit Name(const std::string &what) : Error(#Name ": " + what) {}       \
  }

/// An argument lies outside the documented domain of an operation.
CONEREG_DECLARE_ERROR(DomainError);
/// A series or iteration failed to reach its tolerance.
CONEREG_DECLARE_ERROR(NonConvergence);
/// A root bracket could not be established.
CONEREG_DECLARE_ERROR(BracketError);
CONEREG_DECLARE_ERROR(InvalidOperator);
CONEREG_DECLARE_ERROR(InvalidAlpha);
CONEREG_DECLARE_ERROR(DegenerateBC);
CONEREG_DECLARE_ERROR(InvalidTilt);
CONEREG_DECLARE_ERROR(NoAdmissibleTilt);
CONEREG_DECLARE_ERROR(SingularSystem);
CONEREG_DECLARE_ERROR(DegenerateFit);
CONEREG_DECLARE_ERROR(HypothesisError);

#undef CONEREG_DECLARE_ERROR

} // namespace conereg
