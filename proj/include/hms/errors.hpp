#pragma once

#include <stdexcept>
#include <string>

namespace hms {

// Every failure the library raises deliberately carries one of these tags so
// callers (and tests) can dispatch on the cause without parsing messages.
enum class ErrorKind {
  // geometry
  OverlappingLayers,
  DisconnectedDomain,
  CrossPoint,
  // tabulated material data
  NonMonotoneData,
  BadTable,
  OutOfDomain,
  // linear solver
  Breakdown,
  MaxIterExceeded,
  // time stepping
  NonContraction,
  MaxPicardExceeded,
  NonfiniteState,
  // operator pencil root finding
  ContourThroughZero,
  // configuration and file I/O
  ParseError,
  ValidationError,
  NonMonotoneTime,
  BadColumnCount,
  IoError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::OverlappingLayers:  return "OverlappingLayers";
    case ErrorKind::DisconnectedDomain: return "DisconnectedDomain";
    case ErrorKind::CrossPoint:         return "CrossPoint";
    case ErrorKind::NonMonotoneData:    return "NonMonotoneData";
    case ErrorKind::BadTable:           return "BadTable";
    case ErrorKind::OutOfDomain:        return "OutOfDomain";
    case ErrorKind::Breakdown:          return "Breakdown";
    case ErrorKind::MaxIterExceeded:    return "MaxIterExceeded";
    case ErrorKind::NonContraction:     return "NonContraction";
    case ErrorKind::MaxPicardExceeded:  return "MaxPicardExceeded";
    case ErrorKind::NonfiniteState:     return "NonfiniteState";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::ParseError:         return "ParseError";
    case ErrorKind::ValidationError:    return "ValidationError";
    case ErrorKind::NonMonotoneTime:    return "NonMonotoneTime";
    case ErrorKind::BadColumnCount:     return "BadColumnCount";
    case ErrorKind::IoError:            return "IoError";
  }
  return "Error";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

} // namespace hms
