#pragma once

#include <stdexcept>
#include <string>

namespace gaitxai {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
  InputMissing = 2,   // missing files, unreadable streams, absent prior outputs
  Precondition = 3,   // violated operation preconditions / invariants
  Config = 4,         // unparseable configuration or flags
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what),
        kind_(kind),
        code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

#define GAITXAI_ERROR(NAME, KIND)                            \
  class NAME : public Error {                                \
   public:                                                   \
    explicit NAME(const std::string& what)                   \
        : Error(ErrorKind::KIND, #NAME, what) {}             \
  };

GAITXAI_ERROR(SchemaError, Precondition)
GAITXAI_ERROR(LengthMismatch, Precondition)
GAITXAI_ERROR(LabelConflict, Precondition)
GAITXAI_ERROR(NonFiniteValue, Precondition)
GAITXAI_ERROR(TooFewSubjects, Precondition)
GAITXAI_ERROR(ShapeMismatch, Precondition)
GAITXAI_ERROR(DegenerateSplit, Precondition)
GAITXAI_ERROR(EmptyDataset, Precondition)
GAITXAI_ERROR(EmptyGroup, Precondition)
GAITXAI_ERROR(GroupTooSmall, Precondition)
GAITXAI_ERROR(DegenerateResiduals, Precondition)
GAITXAI_ERROR(NoSolution, Precondition)
GAITXAI_ERROR(ZeroCurve, Precondition)
GAITXAI_ERROR(DataNotFound, InputMissing)
GAITXAI_ERROR(MissingInput, InputMissing)
GAITXAI_ERROR(CheckpointMismatch, InputMissing)
GAITXAI_ERROR(IoError, InputMissing)
GAITXAI_ERROR(BadFlag, Config)
GAITXAI_ERROR(ConfigError, Config)

#undef GAITXAI_ERROR

}  // namespace gaitxai
