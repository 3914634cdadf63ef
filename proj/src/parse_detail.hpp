#ifndef TTIQ_PARSE_DETAIL_HPP
#define TTIQ_PARSE_DETAIL_HPP

#include <vector>

#include "lexer.hpp"
#include "ttiq/parser.hpp"

namespace ttiq::detail {

// Parses a complete type from a token sequence ending in Tok::End.
TypePtr parse_type_tokens(std::vector<Token> toks, const ParseContext& ctx);

// Parses a complete term from a token sequence ending in Tok::End.
TermPtr parse_term_tokens(std::vector<Token> toks, const ParseContext& ctx);

}  // namespace ttiq::detail

#endif
