#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conjorder/term.hpp"

namespace conjorder {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Program parse_program(std::string_view text);
Literal parse_literal(std::string_view text);
// Comma-separated literals; a trailing '.' is optional.
std::vector<Literal> parse_goal(std::string_view text);
// One `?- lit, ..., lit.` per query. Blank lines and % comments are skipped.
std::vector<std::vector<Literal>> parse_queries(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace conjorder
