#pragma once

#include <stdexcept>
#include <string>

namespace rcm {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct NotSPD : Error { using Error::Error; };
struct EmptyClass : Error { using Error::Error; };
struct InfeasibleRCH : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct InvalidBracket : Error { using Error::Error; };
struct NotSeparated : Error { using Error::Error; };
struct InvalidDirection : Error { using Error::Error; };
struct SubproblemUnbounded : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct InvalidRate : Error { using Error::Error; };
struct LossOverflow : Error { using Error::Error; };
struct InvalidLoss : Error { using Error::Error; };
struct EmptyFamily : Error { using Error::Error; };
struct DegenerateMeans : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct NotDifferentiable : Error { using Error::Error; };

/// CSV ingestion errors carry the 1-based line number.
struct FormatError : Error {
  int line;
  FormatError(int line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct LabelError : Error {
  int line;
  LabelError(int line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

}  // namespace rcm
