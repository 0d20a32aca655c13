#include "streetnet/error.hpp"

namespace streetnet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoResult: return "NoResult";
    case ErrorKind::RateLimited: return "RateLimited";
    case ErrorKind::Transport: return "Transport";
    case ErrorKind::ServerBusy: return "ServerBusy";
    case ErrorKind::FixtureMissing: return "FixtureMissing";
    case ErrorKind::ProviderAuth: return "ProviderAuth";
    case ErrorKind::PartialFailure: return "PartialFailure";
    case ErrorKind::MalformedPayload: return "MalformedPayload";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DanglingRef: return "DanglingRef";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::AlreadySimplified: return "AlreadySimplified";
    case ErrorKind::AlreadyProjected: return "AlreadyProjected";
    case ErrorKind::NotProjected: return "NotProjected";
    case ErrorKind::InvalidPolygon: return "InvalidPolygon";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorKind::NoPath: return "NoPath";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::MissingWeight: return "MissingWeight";
    case ErrorKind::MissingElevation: return "MissingElevation";
  }
  return "Unknown";
}

}  // namespace streetnet
