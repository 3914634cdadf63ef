#ifndef TTIQ_LEXER_HPP
#define TTIQ_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "ttiq/ast.hpp"
#include "ttiq/parser.hpp"

namespace ttiq {

enum class Tok {
  End,
  Ident,
  QVar,  // ?name
  Str,
  Num,
  DateTok,
  Uri,
  KwExists,
  KwForall,
  KwOf,
  KwTrue,
  KwFalse,
  KwPrim,  // string | num | bool | uri | date
  Star,
  Arrow,
  Dot,
  Comma,
  Colon,
  Semi,
  Assign,  // =
  EqEq,    // ==
  Leq,     // <=
  LParen,
  RParen,
  LBrace,
  RBrace,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, string value, uri body, raw digits
  BigInt num;
  Date date;
  Prim prim = Prim::String;
  int line = 1;
  int col = 1;
};

// Tokenizes a whole source string; throws ParseError on bad input.
std::vector<Token> tokenize(std::string_view src);

std::string token_desc(const Token& tok);

}  // namespace ttiq

#endif
