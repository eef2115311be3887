#pragma once

// Reader and writer for the line-oriented use-case project format
// (`.ucp.txt`). See docs/formats.md for the grammar.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucpoint/errors.hpp"
#include "ucpoint/scenario_model.hpp"

namespace ucpoint {

struct ParseDiagnostic {
  std::size_t line = 1;  // 1-based
  Severity severity = Severity::Error;
  std::string message;
};

struct ParseResult {
  std::optional<ProjectSpec> project;  // empty when any Error was reported
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return project.has_value(); }
  bool has_errors() const;
};

// Never throws on malformed input; problems are reported as diagnostics.
ParseResult parse_project(std::string_view source);

// Canonical text form; parse_project(serialize_project(s)) reproduces s.
// Step text is synthetic, only step counts are preserved.
std::string serialize_project(const ProjectSpec& spec);

std::string format_diagnostic(const ParseDiagnostic& d, std::string_view source_name = {});

}  // namespace ucpoint
