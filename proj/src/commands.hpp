#pragma once

#include <string>
#include <vector>

#include "io.hpp"

namespace mmgrad {

struct Response {
  io::Json body;
  int exit_code = 0;  // 0 success or pass, 1 check failure, 2 input error
  int digits = io::kReportDigits;

  std::string text() const { return io::write(body, digits); }
};

/// Subcommands accepted by run().
const std::vector<std::string>& command_names();

/// Executes one request: {"command": NAME, "space": SPACE_JSON, "fields":
/// {name: FIELD_JSON}, "curves": POLICY | FAMILY_JSON, "cover": COVER_JSON,
/// plus command parameters at top level}. Never throws.
Response run(const io::Json& request);

/// Parses request text first; malformed text gives exit code 2.
Response run_text(const std::string& request);

}  // namespace mmgrad
