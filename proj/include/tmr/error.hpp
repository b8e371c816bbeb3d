#pragma once

#include <stdexcept>
#include <string>

namespace tmr {

/// Broad failure classes; the CLI maps them onto exit codes 2, 3 and 4.
enum class ErrorClass { usage, data, statistical };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string code, const std::string& what)
      : std::runtime_error(what), class_(cls), code_(std::move(code)) {}

  ErrorClass error_class() const noexcept { return class_; }
  /// Stable machine-readable identifier, e.g. "dimension_error".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorClass class_;
  std::string code_;
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error(ErrorClass::data, "dimension_error", w) {}
};

struct DegenerateModeError : Error {
  explicit DegenerateModeError(const std::string& w)
      : Error(ErrorClass::data, "degenerate_mode", w) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorClass::data, "format_error", w) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w)
      : Error(ErrorClass::usage, "invalid_argument", w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorClass::usage, "domain_error", w) {}
};

struct SolverError : Error {
  explicit SolverError(const std::string& w) : Error(ErrorClass::data, "solver_error", w) {}
};

struct ContaminationError : Error {
  explicit ContaminationError(const std::string& w)
      : Error(ErrorClass::data, "vacuum_contaminated", w) {}
};

/// The estimated photon numbers are below what the data can resolve.
struct StatisticalFloorError : Error {
  explicit StatisticalFloorError(const std::string& w)
      : Error(ErrorClass::statistical, "statistical_floor", w) {}
};

struct UnsupportedMultimodeError : Error {
  explicit UnsupportedMultimodeError(const std::string& w)
      : Error(ErrorClass::statistical, "unsupported_multimode", w) {}
};

}  // namespace tmr
