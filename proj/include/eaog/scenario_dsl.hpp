#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eaog/errors.hpp"
#include "eaog/scenario.hpp"

namespace eaog {

/// Located diagnostic raised by parse_scenario. code() is LexError,
/// ParseError or ResolveError.
class DslError : public Error {
 public:
  DslError(ErrorCode code, int line, int column, std::vector<std::string> expected,
           const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

  /// `line:col: error: <kind>: message [expected: ...]`
  std::string diagnostic() const;

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

Scenario parse_scenario(std::string_view text);
std::string serialize(const Scenario& scenario);
std::string serialize(const GraphTemplate& tmpl);

/// Formats a double in shortest fixed notation that parses back exactly.
std::string format_number(double value);

}  // namespace eaog
