#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace streetnet {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes.
enum class ErrorKind {
  // acquisition
  NoResult,
  RateLimited,
  Transport,
  ServerBusy,
  FixtureMissing,
  ProviderAuth,
  PartialFailure,
  // parsing / persistence
  MalformedPayload,
  UnsupportedFormat,
  SchemaViolation,
  ParseError,
  IoError,
  // graph construction and transforms
  InvalidArgument,
  DanglingRef,
  UnknownNode,
  AlreadySimplified,
  AlreadyProjected,
  NotProjected,
  InvalidPolygon,
  EmptyResult,
  EmptyGraph,
  // analysis and routing
  NonConvergence,
  NotStronglyConnected,
  NoPath,
  NegativeWeight,
  MissingWeight,
  MissingElevation,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace streetnet
