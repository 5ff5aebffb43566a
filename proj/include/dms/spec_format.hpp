// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dms/engine.hpp"

namespace dms {

struct ParseError : DmsError {
  ParseError(std::size_t line, std::size_t column, const std::string& expected)
      : DmsError("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " +
                 expected),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

/// Parsed .dms specification: the system plus the declared pool and optional
/// target action.
struct SpecFile {
  DmsSystem system;
  std::vector<std::string> pool_constants;
  std::optional<std::string> target;
  std::vector<std::pair<std::string, Guard>> guards;  // declaration order
};

/// Line-oriented format:
///   pred P/1
///   const A B C
///   init P(A), F(A,B)
///   guard g_df := F(x,y) & !F(y,x)
///   action a_rev := guard g_df del F(x,y) add F(y,x)
///   target a_end
/// Guard expressions: atoms, '=', '!', '&', 'exists x.' / 'exists x, y.',
/// 'forall x.' over negated atoms, 'true'. Identifiers declared by `const`
/// are constants; all other identifiers in guards are variables.
SpecFile parse_spec(const std::string& text);

/// Guard expression parser against a fixed set of constant names.
Guard parse_guard_text(const std::string& text, const std::set<std::string>& constants);

std::string render_spec(const SpecFile& spec);

/// Parses a file that lists one database per line as atoms separated by
/// commas (blank lines and '#' comments ignored); used by the CLI --set flag.
std::vector<Database> parse_database_set(const std::string& text,
                                         const std::set<std::string>& constants);

}  // namespace dms
