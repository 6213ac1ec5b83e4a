#pragma once

#include <stdexcept>
#include <string>

namespace tateforge {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define TATEFORGE_ERROR(Name)                                       \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  };

TATEFORGE_ERROR(TruncationExceeded)
TATEFORGE_ERROR(SubNotContained)
TATEFORGE_ERROR(IllDefinedMap)
TATEFORGE_ERROR(NotSurjective)
TATEFORGE_ERROR(NotConnected)
TATEFORGE_ERROR(InhomogeneousElement)
TATEFORGE_ERROR(InhomogeneousRelation)
TATEFORGE_ERROR(InvalidInput)
TATEFORGE_ERROR(MinimalityViolation)
TATEFORGE_ERROR(LiftFailure)
TATEFORGE_ERROR(UndefinedReference)

#undef TATEFORGE_ERROR

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("ParseError: line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace tateforge
