#include "ttiq/parser.hpp"

#include <algorithm>
#include <optional>

#include "lexer.hpp"
#include "parse_detail.hpp"

namespace ttiq {

namespace {

// Recursive descent over a token vector. Type and term syntax share one
// grammar: wherever a type is expected, a term may appear instead and parses
// as an embedded proposition (PropType). Backtracking is a saved token index.
class Parser {
public:
  Parser(std::vector<Token> toks, ParseContext ctx)
      : toks_(std::move(toks)), ctx_(std::move(ctx)) {}

  TypePtr type_entry() {
    TypePtr t = type_expr(false);
    expect(Tok::End, "end of input");
    return t;
  }

  TermPtr term_entry() {
    TermPtr t = term_expr();
    expect(Tok::End, "end of input");
    return t;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseContext ctx_;
  std::vector<std::string> bound_type_vars_;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead = 1) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok kind) const { return cur().kind == kind; }

  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + ", found " + token_desc(cur()), cur().line, cur().col);
  }

  Token expect(Tok kind, const char* what) {
    if (!at(kind))
      fail(std::string("expected ") + what);
    return take();
  }

  bool known_type_name(std::string_view name) const {
    if (std::find(bound_type_vars_.begin(), bound_type_vars_.end(), name) !=
        bound_type_vars_.end())
      return true;
    return !ctx_.is_type_name || ctx_.is_type_name(name);
  }

  bool symbol_name(std::string_view name) const {
    return ctx_.is_symbol && ctx_.is_symbol(name);
  }

  // --- types ----------------------------------------------------------------

  // domain_pos: parsing a quantifier's binder domain, where '.' terminates the
  // type and term fallbacks are disabled (parenthesize to embed a term).
  TypePtr type_expr(bool domain_pos) {
    if (at(Tok::KwExists) || at(Tok::KwForall)) {
      bool is_exists = take().kind == Tok::KwExists;
      std::string var = expect(Tok::Ident, "binder variable").text;
      if (at(Tok::Colon)) {
        take();
        TypePtr domain = type_expr(true);
        expect(Tok::Dot, "'.' after binder");
        TypePtr body = type_expr(false);
        return is_exists ? types::dep_sum(var, domain, body)
                         : types::dep_prod(var, domain, body);
      }
      if (at(Tok::Leq)) {
        take();
        TypePtr bound = type_expr(true);
        expect(Tok::Dot, "'.' after binder");
        bound_type_vars_.push_back(var);
        TypePtr body;
        try {
          body = type_expr(false);
        } catch (...) {
          bound_type_vars_.pop_back();
          throw;
        }
        bound_type_vars_.pop_back();
        return is_exists ? types::bounded_sum(var, bound, body)
                         : types::bounded_prod(var, bound, body);
      }
      fail("expected ':' or '<=' after quantifier variable");
    }
    return arrowable(domain_pos);
  }

  struct ProductItem {
    std::optional<std::string> label;
    TypePtr type;
    int line, col;
  };

  TypePtr arrowable(bool domain_pos) {
    std::vector<ProductItem> items;
    while (true) {
      ProductItem item;
      item.line = cur().line;
      item.col = cur().col;
      if (at(Tok::Ident) && peek().kind == Tok::Colon) {
        item.label = take().text;
        take();  // ':'
        item.type = atom(domain_pos);
      } else {
        item.type = atom(domain_pos);
      }
      items.push_back(std::move(item));
      if (at(Tok::Star)) {
        take();
        continue;
      }
      break;
    }

    bool all_labeled = std::all_of(items.begin(), items.end(),
                                   [](const ProductItem& i) { return i.label.has_value(); });
    bool none_labeled = std::none_of(items.begin(), items.end(),
                                     [](const ProductItem& i) { return i.label.has_value(); });
    if (!all_labeled && !none_labeled)
      throw ParseError("cannot mix labeled and unlabeled product components", items[0].line,
                       items[0].col);

    auto build_front = [&]() -> TypePtr {
      if (all_labeled) {
        std::vector<RecordField> fields;
        std::vector<std::string_view> seen;
        for (auto& i : items) {
          if (std::find(seen.begin(), seen.end(), *i.label) != seen.end())
            throw ParseError("duplicate record label '" + *i.label + "'", i.line, i.col);
          seen.push_back(*i.label);
          fields.push_back({*i.label, i.type});
        }
        return types::record(std::move(fields));
      }
      if (items.size() == 1)
        return items[0].type;
      throw ParseError("unlabeled product type is only valid before '->'", items[0].line,
                       items[0].col);
    };

    if (at(Tok::Arrow)) {
      take();
      TypePtr result = type_expr(domain_pos);
      std::vector<TypePtr> params;
      if (all_labeled && items.size() > 1) {
        params.push_back(build_front());
      } else {
        for (auto& i : items)
          params.push_back(i.label ? types::record({{*i.label, i.type}}) : i.type);
      }
      return types::arrow(std::move(params), result);
    }
    return build_front();
  }

  TypePtr atom(bool domain_pos) {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::KwPrim: {
        Prim p = take().prim;
        return types::prim(p);
      }
      case Tok::LBrace: {
        take();
        std::vector<std::string> values;
        values.push_back(expect(Tok::Str, "string literal").text);
        while (at(Tok::Comma)) {
          take();
          values.push_back(expect(Tok::Str, "string literal").text);
        }
        expect(Tok::RBrace, "'}'");
        for (std::size_t i = 0; i < values.size(); ++i)
          for (std::size_t j = i + 1; j < values.size(); ++j)
            if (values[i] == values[j])
              throw ParseError("duplicate enumerated value '" + values[i] + "'", t.line, t.col);
        return types::enumerated(std::move(values));
      }
      case Tok::KwExists:
      case Tok::KwForall:
        fail("quantified type must be parenthesized here");
      case Tok::LParen: {
        std::size_t saved = pos_;
        take();
        try {
          TypePtr inner = type_expr(false);
          expect(Tok::RParen, "')'");
          // '.' or '==' right after the closing paren means the whole region
          // was a term; in domain position the '.' is the binder's dot
          if (!domain_pos && (at(Tok::Dot) || at(Tok::EqEq))) {
            pos_ = saved;
            return term_fallback();
          }
          return inner;
        } catch (const ParseError&) {
          pos_ = saved;
          if (domain_pos)
            throw;
          return term_fallback();
        }
      }
      case Tok::Ident: {
        if (peek().kind == Tok::KwOf)
          return concrete_type(domain_pos);
        Tok next = peek().kind;
        bool termish = next == Tok::Dot || next == Tok::EqEq || next == Tok::LParen;
        if (termish && !domain_pos)
          return term_fallback();
        if (!known_type_name(t.text)) {
          if (!domain_pos)
            return term_fallback();
          throw ParseError("unknown type name '" + t.text + "'", t.line, t.col);
        }
        return types::named(take().text);
      }
      case Tok::Str:
      case Tok::Num:
      case Tok::DateTok:
      case Tok::Uri:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::QVar:
        if (domain_pos)
          fail("expected a type");
        return term_fallback();
      default:
        fail("expected a type");
    }
  }

  TypePtr concrete_type(bool domain_pos) {
    std::string ctor = take().text;
    expect(Tok::KwOf, "'of'");
    std::vector<TypePtr> args;
    args.push_back(atom(domain_pos));
    while (at(Tok::Star)) {
      take();
      args.push_back(atom(domain_pos));
    }
    expect(Tok::Arrow, "'->' in concrete datatype");
    std::string datatype = expect(Tok::Ident, "datatype name").text;
    return types::concrete(std::move(ctor), std::move(args), std::move(datatype));
  }

  TypePtr term_fallback() { return types::prop(term_expr()); }

  // --- terms ----------------------------------------------------------------

  TermPtr term_expr() {
    TermPtr lhs = term_postfix();
    if (at(Tok::EqEq)) {
      take();
      TermPtr rhs = term_postfix();
      return terms::sym_app("==", {lhs, rhs});
    }
    return lhs;
  }

  TermPtr term_postfix() {
    TermPtr t = term_primary();
    while (at(Tok::Dot)) {
      take();
      std::string label = expect(Tok::Ident, "field label after '.'").text;
      t = terms::select(t, std::move(label));
    }
    return t;
  }

  TermPtr term_primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Str: return terms::str(take().text);
      case Tok::Num: return terms::num(take().num);
      case Tok::DateTok: return terms::date(take().date);
      case Tok::Uri: return terms::uri(take().text);
      case Tok::KwTrue: take(); return terms::boolean(true);
      case Tok::KwFalse: take(); return terms::boolean(false);
      case Tok::QVar: return terms::var(take().text);
      case Tok::Ident: {
        std::string name = take().text;
        if (at(Tok::LParen)) {
          take();
          std::vector<TermPtr> args;
          if (!at(Tok::RParen)) {
            args.push_back(term_expr());
            while (at(Tok::Comma)) {
              take();
              args.push_back(term_expr());
            }
          }
          expect(Tok::RParen, "')'");
          if (symbol_name(name))
            return terms::sym_app(std::move(name), std::move(args));
          return terms::ctor_app(std::move(name), std::move(args));
        }
        return terms::var(std::move(name));
      }
      case Tok::LParen: {
        take();
        if (at(Tok::Ident) && peek().kind == Tok::Assign)
          return record_body();
        TermPtr first = term_expr();
        if (at(Tok::Comma)) {
          std::vector<TermPtr> elems{first};
          while (at(Tok::Comma)) {
            take();
            elems.push_back(term_expr());
          }
          expect(Tok::RParen, "')'");
          TermPtr acc = elems.back();
          for (std::size_t i = elems.size() - 1; i-- > 0;)
            acc = terms::pair(elems[i], acc);
          return acc;
        }
        expect(Tok::RParen, "')'");
        return first;
      }
      default:
        fail("expected a term");
    }
  }

  TermPtr record_body() {
    std::vector<TermField> fields;
    std::vector<std::string> seen;
    while (true) {
      const Token& lt = cur();
      std::string label = expect(Tok::Ident, "field label").text;
      if (std::find(seen.begin(), seen.end(), label) != seen.end())
        throw ParseError("duplicate record label '" + label + "'", lt.line, lt.col);
      expect(Tok::Assign, "'='");
      TermPtr value = term_expr();
      fields.push_back({label, value});
      seen.push_back(label);
      if (at(Tok::Comma)) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::RParen, "')'");
    return terms::record(std::move(fields));
  }
};

}  // namespace

ParseContext make_context(const Schema& schema, const Environment& env) {
  ParseContext ctx;
  ctx.is_type_name = [&schema](std::string_view name) { return schema.lookup(name) != nullptr; };
  ctx.is_symbol = [&env](std::string_view name) { return env.is_symbol(name); };
  return ctx;
}

TypePtr parse_type(std::string_view source, const Schema& schema) {
  ParseContext ctx;
  ctx.is_type_name = [&schema](std::string_view name) { return schema.lookup(name) != nullptr; };
  return parse_type(source, ctx);
}

TypePtr parse_type(std::string_view source, const ParseContext& ctx) {
  Parser p(tokenize(source), ctx);
  return p.type_entry();
}

TermPtr parse_term(std::string_view source) {
  return parse_term(source, ParseContext{});
}

TermPtr parse_term(std::string_view source, const Environment& env) {
  ParseContext ctx;
  ctx.is_symbol = [&env](std::string_view name) { return env.is_symbol(name); };
  return parse_term(source, ctx);
}

TermPtr parse_term(std::string_view source, const ParseContext& ctx) {
  Parser p(tokenize(source), ctx);
  return p.term_entry();
}

namespace detail {

TypePtr parse_type_tokens(std::vector<Token> toks, const ParseContext& ctx) {
  Parser p(std::move(toks), ctx);
  return p.type_entry();
}

TermPtr parse_term_tokens(std::vector<Token> toks, const ParseContext& ctx) {
  Parser p(std::move(toks), ctx);
  return p.term_entry();
}

}  // namespace detail

}  // namespace ttiq
