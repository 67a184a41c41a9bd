#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reqlattice {

enum class ErrorCode {
  UnknownId,
  EmptyCatalog,
  CatalogInvalid,
  ParseError,
  SchemaError,
  FocusRequired,
  FocusForbidden,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::EmptyCatalog: return "EmptyCatalog";
    case ErrorCode::CatalogInvalid: return "CatalogInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::FocusRequired: return "FocusRequired";
    case ErrorCode::FocusForbidden: return "FocusForbidden";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library. Validation problems are not errors:
// they are reported as data by validate().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorCode::ParseError, message + " at line " + std::to_string(line) + ", column " +
                                         std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline Error unknown_id(std::string_view what, std::string_view id) {
  return Error(ErrorCode::UnknownId, std::string(what) + " '" + std::string(id) + "' not in catalog");
}

}  // namespace reqlattice
