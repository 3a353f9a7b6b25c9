#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eaog {

enum class ErrorCode {
  // andor_graph
  DuplicateNodeId,
  DanglingReference,
  CycleDetected,
  MissingRoot,
  MissingFailure,
  NotALeaf,
  UnknownNode,
  AlreadyAugmented,
  InvalidArc,
  InvalidNode,
  RootUnreachable,
  // graph_net_search
  EmptyCandidateSet,
  DepthLimitExceeded,
  // domain_model
  PreconditionViolated,
  UnknownEntity,
  // geometric_world
  InvalidQuery,
  StaleResult,
  // tmp_interface
  GroundingFailed,
  StaleWorld,
  // planner / cli
  ConfigInvalid,
  BadDiskCount,
  // scenario_dsl
  LexError,
  ParseError,
  ResolveError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; `element` names the offending
// node, fact, entity or token when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string element, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        element_(std::move(element)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& element() const noexcept { return element_; }

 private:
  ErrorCode code_;
  std::string element_;
};

}  // namespace eaog
