#pragma once

#include <stdexcept>
#include <string>

namespace rapidlearn {

// Stable numeric values: these are mirrored by the C API status codes.
enum class ErrorCode : int {
  Parse = 1,
  Validation = 2,
  UnknownType = 3,
  UnsupportedConstruct = 4,
  InapplicableOperator = 5,
  NegativeFluent = 6,
  PlannerTimeout = 7,
  PlacementOverflow = 8,
  EpisodeOver = 9,
  NoPath = 10,
  NoTarget = 11,
  UnknownNovelty = 12,
  PreconditionUnmet = 13,
  DimensionMismatch = 14,
  EmptyBiasSet = 15,
  EmptyBuffer = 16,
  OperatorNotInPlan = 17,
  PrefixExecutionFailed = 18,
  NoNovelEntity = 19,
  EmptyGroup = 20,
  DegenerateVariance = 21,
  DiscoveryBudgetExhausted = 22,
  ExecutorMismatch = 23,
  Io = 24,
  InvalidArgument = 25,
  InvariantViolation = 26,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(ErrorCode::Parse, message + " at line " + std::to_string(line) +
                                    ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace rapidlearn
