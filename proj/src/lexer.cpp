#include "lexer.hpp"

#include <cctype>

namespace ttiq {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool digit(char c) {
  return c >= '0' && c <= '9';
}

struct Scanner {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= src.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }

  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

  void skip_trivia() {
    while (!done()) {
      char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n')
          advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string scan_quoted(char quote) {
    std::string out;
    advance();  // opening quote
    while (true) {
      if (done())
        fail("unterminated string literal");
      char c = advance();
      if (c == quote)
        break;
      if (c == '\n')
        fail("newline in string literal");
      if (c == '\\') {
        if (done())
          fail("unterminated escape");
        char e = advance();
        switch (e) {
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string scan_digits() {
    std::string out;
    while (digit(peek()))
      out += advance();
    return out;
  }
};

bool valid_uri_body(std::string_view body) {
  std::size_t colon = body.find(':');
  if (colon == 0 || colon == std::string_view::npos)
    return false;
  if (!std::isalpha(static_cast<unsigned char>(body[0])))
    return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = body[i];
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.'))
      return false;
  }
  for (char c : body)
    if (std::isspace(static_cast<unsigned char>(c)))
      return false;
  return true;
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  Scanner s{src};
  std::vector<Token> out;

  auto push = [&](Tok kind, int line, int col, std::string text = {}) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    out.push_back(std::move(t));
  };

  while (true) {
    s.skip_trivia();
    int line = s.line, col = s.col;
    if (s.done()) {
      push(Tok::End, line, col);
      break;
    }
    char c = s.peek();

    if (ident_start(c)) {
      std::string name;
      while (ident_char(s.peek()))
        name += s.advance();
      if (name == "exists") {
        push(Tok::KwExists, line, col, name);
      } else if (name == "forall") {
        push(Tok::KwForall, line, col, name);
      } else if (name == "of") {
        push(Tok::KwOf, line, col, name);
      } else if (name == "true") {
        push(Tok::KwTrue, line, col, name);
      } else if (name == "false") {
        push(Tok::KwFalse, line, col, name);
      } else if (auto p = prim_from_name(name)) {
        Token t;
        t.kind = Tok::KwPrim;
        t.prim = *p;
        t.text = name;
        t.line = line;
        t.col = col;
        out.push_back(std::move(t));
      } else {
        push(Tok::Ident, line, col, name);
      }
      continue;
    }

    if (c == '?') {
      s.advance();
      if (!ident_start(s.peek()))
        s.fail("expected variable name after '?'");
      std::string name = "?";
      while (ident_char(s.peek()))
        name += s.advance();
      push(Tok::QVar, line, col, name);
      continue;
    }

    if (digit(c) || (c == '-' && digit(s.peek(1)))) {
      bool neg = c == '-';
      if (neg)
        s.advance();
      std::string first = s.scan_digits();
      // A date looks like D+-D+-D+ with no intervening spaces.
      if (!neg && s.peek() == '-' && digit(s.peek(1))) {
        Scanner saved = s;
        s.advance();
        std::string second = s.scan_digits();
        if (s.peek() == '-' && digit(s.peek(1))) {
          s.advance();
          std::string third = s.scan_digits();
          if (first.size() <= 4 && second.size() <= 2 && third.size() <= 2) {
            int y = std::stoi(first), m = std::stoi(second), d = std::stoi(third);
            if (!Date::valid(y, m, d))
              throw ParseError("invalid calendar date", line, col);
            Token t;
            t.kind = Tok::DateTok;
            t.date = Date{y, m, d};
            t.line = line;
            t.col = col;
            out.push_back(std::move(t));
            continue;
          }
        }
        s = saved;  // not a date after all
      }
      Token t;
      t.kind = Tok::Num;
      t.num = BigInt::from_string((neg ? "-" : "") + first);
      t.line = line;
      t.col = col;
      out.push_back(std::move(t));
      continue;
    }

    if (c == '\'' || c == '"') {
      push(Tok::Str, line, col, s.scan_quoted(c));
      continue;
    }

    if (c == '<') {
      if (s.peek(1) == '=') {
        s.advance();
        s.advance();
        push(Tok::Leq, line, col, "<=");
        continue;
      }
      s.advance();
      std::string body;
      while (!s.done() && s.peek() != '>') {
        if (s.peek() == '\n')
          s.fail("unterminated uri literal");
        body += s.advance();
      }
      if (s.done())
        s.fail("unterminated uri literal");
      s.advance();  // '>'
      if (!valid_uri_body(body))
        throw ParseError("malformed uri literal <" + body + ">", line, col);
      push(Tok::Uri, line, col, body);
      continue;
    }

    switch (c) {
      case '*': s.advance(); push(Tok::Star, line, col, "*"); continue;
      case '-':
        s.advance();
        if (s.peek() == '>') {
          s.advance();
          push(Tok::Arrow, line, col, "->");
          continue;
        }
        s.fail("stray '-'");
      case '.': s.advance(); push(Tok::Dot, line, col, "."); continue;
      case ',': s.advance(); push(Tok::Comma, line, col, ","); continue;
      case ':': s.advance(); push(Tok::Colon, line, col, ":"); continue;
      case ';': s.advance(); push(Tok::Semi, line, col, ";"); continue;
      case '=':
        s.advance();
        if (s.peek() == '=') {
          s.advance();
          push(Tok::EqEq, line, col, "==");
        } else {
          push(Tok::Assign, line, col, "=");
        }
        continue;
      case '(': s.advance(); push(Tok::LParen, line, col, "("); continue;
      case ')': s.advance(); push(Tok::RParen, line, col, ")"); continue;
      case '{': s.advance(); push(Tok::LBrace, line, col, "{"); continue;
      case '}': s.advance(); push(Tok::RBrace, line, col, "}"); continue;
      default: s.fail(std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

std::string token_desc(const Token& tok) {
  switch (tok.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "'" + tok.text + "'";
    case Tok::QVar: return "'" + tok.text + "'";
    case Tok::Str: return "string literal";
    case Tok::Num: return "number";
    case Tok::DateTok: return "date";
    case Tok::Uri: return "uri";
    default: return "'" + tok.text + "'";
  }
}

}  // namespace ttiq
