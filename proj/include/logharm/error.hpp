#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace logharm {

using Complex = std::complex<double>;

enum class ErrorKind {
  ParseError,
  UnknownIdentifier,
  PoleEncountered,
  DegenerateDenominator,
  NotSensePreserving,
  CriticalPoint,
  ZeroEncountered,
  AllSamplesFailed,
  InvalidMap,
  InvalidArgument,
  IoFailure,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NotSensePreserving: return "NotSensePreserving";
    case ErrorKind::CriticalPoint: return "CriticalPoint";
    case ErrorKind::ZeroEncountered: return "ZeroEncountered";
    case ErrorKind::AllSamplesFailed: return "AllSamplesFailed";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library. The kind drives CLI exit codes and
/// the structured error JSON; point/offset are filled when meaningful.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<Complex> point = std::nullopt,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(what), kind_(kind), point_(point), offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<Complex>& point() const noexcept { return point_; }
  const std::optional<std::size_t>& offset() const noexcept { return offset_; }

  /// Evaluation failures that a grid sweep may skip over.
  bool is_sample_failure() const noexcept {
    return kind_ == ErrorKind::PoleEncountered ||
           kind_ == ErrorKind::DegenerateDenominator ||
           kind_ == ErrorKind::NotSensePreserving ||
           kind_ == ErrorKind::CriticalPoint ||
           kind_ == ErrorKind::ZeroEncountered;
  }

 private:
  ErrorKind kind_;
  std::optional<Complex> point_;
  std::optional<std::size_t> offset_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what,
                               std::optional<Complex> point = std::nullopt) {
  throw Error(kind, what, point);
}

}  // namespace logharm
