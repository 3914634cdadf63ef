#ifndef TTIQ_PARSER_HPP
#define TTIQ_PARSER_HPP

#include <functional>
#include <string>
#include <string_view>

#include "ttiq/ast.hpp"
#include "ttiq/schema.hpp"

namespace ttiq {

struct ParseError : Error {
  int line;
  int col;

  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// Name predicates the parser consults. `is_type_name` decides whether a bare
// identifier in type position is a valid Named reference; when absent, every
// identifier is accepted. `is_symbol` marks identifiers whose applications
// parse as function/predicate symbol applications instead of constructor
// applications; `==` always counts as a symbol.
struct ParseContext {
  std::function<bool(std::string_view)> is_type_name;
  std::function<bool(std::string_view)> is_symbol;
};

ParseContext make_context(const Schema& schema, const Environment& env);

TypePtr parse_type(std::string_view source, const Schema& schema);
TypePtr parse_type(std::string_view source, const ParseContext& ctx);

TermPtr parse_term(std::string_view source);
TermPtr parse_term(std::string_view source, const Environment& env);
TermPtr parse_term(std::string_view source, const ParseContext& ctx);

}  // namespace ttiq

#endif
