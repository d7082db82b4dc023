#ifndef RBSC_ERRORS_HPP
#define RBSC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rbsc {

// Error taxonomy shared by all modules. The kind drives the CLI exit code:
// infeasible -> 2, bad input/parameters -> 3, exhausted internal cap -> 4.
enum class ErrorKind {
  Structural,
  Parse,
  Parameter,
  Numerical,
  UnknownVariable,
  DegenerateInput,
  Rounding,
  RoundingExhausted,
  LiftingDegenerate,
  CutLoopExhausted,
  NotViolated,
  Infeasible,
  Uncoverable,
  SizeLimit,
  DegenerateGraph,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define RBSC_DEFINE_ERROR(Name, Kind)                    \
  class Name : public Error {                            \
   public:                                               \
    explicit Name(const std::string& what)               \
        : Error(ErrorKind::Kind, what) {}                \
  }

RBSC_DEFINE_ERROR(StructuralError, Structural);
RBSC_DEFINE_ERROR(ParseError, Parse);
RBSC_DEFINE_ERROR(ParameterError, Parameter);
RBSC_DEFINE_ERROR(NumericalFailure, Numerical);
RBSC_DEFINE_ERROR(UnknownVariableError, UnknownVariable);
RBSC_DEFINE_ERROR(DegenerateInputError, DegenerateInput);
RBSC_DEFINE_ERROR(RoundingFailure, Rounding);
RBSC_DEFINE_ERROR(RoundingExhaustedError, RoundingExhausted);
RBSC_DEFINE_ERROR(LiftingDegenerateError, LiftingDegenerate);
RBSC_DEFINE_ERROR(CutLoopExhaustedError, CutLoopExhausted);
RBSC_DEFINE_ERROR(NotViolatedError, NotViolated);
RBSC_DEFINE_ERROR(InfeasibleError, Infeasible);
RBSC_DEFINE_ERROR(UncoverableError, Uncoverable);
RBSC_DEFINE_ERROR(SizeLimitError, SizeLimit);
RBSC_DEFINE_ERROR(DegenerateGraphError, DegenerateGraph);

#undef RBSC_DEFINE_ERROR

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Infeasible:
    case ErrorKind::Uncoverable:
      return 2;
    case ErrorKind::Numerical:
    case ErrorKind::Rounding:
    case ErrorKind::RoundingExhausted:
    case ErrorKind::CutLoopExhausted:
    case ErrorKind::SizeLimit:
      return 4;
    default:
      return 3;
  }
}

}  // namespace rbsc

#endif  // RBSC_ERRORS_HPP
