#pragma once

#include <stdexcept>
#include <string>

namespace demon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

#define DEMON_ERROR(Name)                 \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

DEMON_ERROR(ConflictingObservation)
DEMON_ERROR(ThresholdExceeded)
DEMON_ERROR(UndefinedRound)
DEMON_ERROR(AutomatonMismatch)
DEMON_ERROR(IncompleteEvent)
DEMON_ERROR(StateCapExceeded)
DEMON_ERROR(NoAtomicPropositions)
DEMON_ERROR(RoundBudgetExceeded)
DEMON_ERROR(IncompatiblePlacement)
DEMON_ERROR(InvalidParameters)
DEMON_ERROR(InvalidSpecification)

#undef DEMON_ERROR

}  // namespace demon
