#include "eaog/errors.hpp"

namespace eaog {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::MissingFailure: return "MissingFailure";
    case ErrorCode::NotALeaf: return "NotALeaf";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::AlreadyAugmented: return "AlreadyAugmented";
    case ErrorCode::InvalidArc: return "InvalidArc";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::RootUnreachable: return "RootUnreachable";
    case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::DepthLimitExceeded: return "DepthLimitExceeded";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::StaleResult: return "StaleResult";
    case ErrorCode::GroundingFailed: return "GroundingFailed";
    case ErrorCode::StaleWorld: return "StaleWorld";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::BadDiskCount: return "BadDiskCount";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ResolveError: return "ResolveError";
  }
  return "Error";
}

}  // namespace eaog
