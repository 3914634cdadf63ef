#include "ttiq/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "parse_detail.hpp"

namespace ttiq {

// --- Environment ------------------------------------------------------------

Environment Environment::extended(Declaration decl) const {
  if (lookup(decl.name))
    throw SchemaError("duplicate declaration of '" + decl.name + "'");
  const auto* arrow = decl.type ? decl.type->as<ArrowType>() : nullptr;
  switch (decl.kind) {
    case DeclKind::Variable:
      break;
    case DeclKind::FunctionSymbol:
      if (!arrow || !arrow->result->is<PrimitiveType>())
        throw SchemaError("function symbol '" + decl.name +
                          "' needs a signature with a primitive result type");
      break;
    case DeclKind::PredicateSymbol:
      if (!arrow || !is_prim(arrow->result, Prim::Bool))
        throw SchemaError("predicate symbol '" + decl.name +
                          "' needs a signature with result type bool");
      break;
    case DeclKind::Ctor:
      if (!arrow || !arrow->result->is<NamedType>())
        throw SchemaError("constructor '" + decl.name +
                          "' needs a signature with a datatype result");
      break;
  }
  Environment out = *this;
  out.decls_.push_back(std::move(decl));
  return out;
}

const Declaration* Environment::lookup(std::string_view name) const {
  for (const auto& d : decls_)
    if (d.name == name)
      return &d;
  return nullptr;
}

bool Environment::is_symbol(std::string_view name) const {
  const auto* d = lookup(name);
  return d && (d->kind == DeclKind::FunctionSymbol || d->kind == DeclKind::PredicateSymbol);
}

// --- Schema -----------------------------------------------------------------

Schema Schema::add(std::string name, TypePtr type) const {
  if (bindings_.count(name))
    throw SchemaError("duplicate type definition '" + name + "'");
  Schema out = *this;
  out.bindings_.emplace(std::move(name), std::move(type));
  return out;
}

const TypePtr* Schema::lookup(std::string_view name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  out.reserve(bindings_.size());
  for (const auto& [name, type] : bindings_)
    out.push_back(name);
  return out;
}

// --- schema files -----------------------------------------------------------

namespace {

struct Statement {
  std::vector<Token> toks;  // without the trailing ';', terminated by End
  int line = 1;
  int col = 1;
};

std::vector<Statement> split_statements(const std::vector<Token>& toks) {
  std::vector<Statement> out;
  Statement cur;
  bool first = true;
  for (const auto& t : toks) {
    if (t.kind == Tok::End)
      break;
    if (first) {
      cur.line = t.line;
      cur.col = t.col;
      first = false;
    }
    if (t.kind == Tok::Semi) {
      Token end;
      end.kind = Tok::End;
      end.line = t.line;
      end.col = t.col;
      cur.toks.push_back(end);
      out.push_back(std::move(cur));
      cur = Statement{};
      first = true;
    } else {
      cur.toks.push_back(t);
    }
  }
  if (!cur.toks.empty())
    throw ParseError("missing ';' after declaration", cur.line, cur.col);
  return out;
}

}  // namespace

SchemaFile parse_schema(std::string_view text, const std::string& origin) {
  std::vector<Statement> statements;
  try {
    statements = split_statements(tokenize(text));
  } catch (const ParseError& e) {
    throw SchemaError(origin + ": " + e.what());
  }

  // First pass: collect declared names so definitions may refer forward.
  std::set<std::string> type_names;
  std::set<std::string> symbol_names;
  for (const auto& st : statements) {
    const auto& head = st.toks.front();
    if (head.kind != Tok::Ident || st.toks.size() < 2)
      throw SchemaError(origin + ": expected 'type', 'ctor', 'fn' or 'pred' at " +
                        std::to_string(st.line) + ":" + std::to_string(st.col));
    if (head.text == "type") {
      if (st.toks[1].kind == Tok::Ident)
        type_names.insert(st.toks[1].text);
    } else if (head.text == "ctor") {
      // the datatype name is the identifier after the last '->'
      for (std::size_t i = st.toks.size(); i-- > 1;) {
        if (st.toks[i].kind == Tok::Arrow) {
          if (i + 1 < st.toks.size() && st.toks[i + 1].kind == Tok::Ident)
            type_names.insert(st.toks[i + 1].text);
          break;
        }
      }
    } else if (head.text == "fn" || head.text == "pred") {
      if (st.toks[1].kind == Tok::Ident)
        symbol_names.insert(st.toks[1].text);
    }
  }

  ParseContext ctx;
  ctx.is_type_name = [&type_names](std::string_view n) {
    return type_names.count(std::string(n)) > 0;
  };
  ctx.is_symbol = [&symbol_names](std::string_view n) {
    return symbol_names.count(std::string(n)) > 0;
  };

  SchemaFile out;
  auto rest_of = [](const Statement& st, std::size_t from) {
    return std::vector<Token>(st.toks.begin() + from, st.toks.end());
  };

  try {
    for (const auto& st : statements) {
      const std::string& kw = st.toks.front().text;
      if (kw == "type") {
        if (st.toks.size() < 4 || st.toks[1].kind != Tok::Ident ||
            st.toks[2].kind != Tok::Assign)
          throw ParseError("expected 'type <Name> = <type>'", st.line, st.col);
        out.schema = out.schema.add(st.toks[1].text, detail::parse_type_tokens(rest_of(st, 3), ctx));
      } else if (kw == "ctor") {
        // 'ctor c of T1 * ... * Tn -> C' reuses the concrete-type syntax
        auto ty = detail::parse_type_tokens(rest_of(st, 1), ctx);
        const auto* conc = ty->as<ConcreteType>();
        if (!conc)
          throw ParseError("expected 'ctor <c> of <T1> * ... * <Tn> -> <C>'", st.line, st.col);
        out.env = out.env.extended({conc->ctor, DeclKind::Ctor,
                                    types::arrow(conc->args, types::named(conc->datatype))});
        out.schema = out.schema.add(conc->datatype, ty);
      } else if (kw == "fn" || kw == "pred") {
        if (st.toks.size() < 4 || st.toks[1].kind != Tok::Ident ||
            st.toks[2].kind != Tok::Colon)
          throw ParseError("expected '" + kw + " <name> : <signature>'", st.line, st.col);
        auto sig = detail::parse_type_tokens(rest_of(st, 3), ctx);
        out.env = out.env.extended(
            {st.toks[1].text,
             kw == "fn" ? DeclKind::FunctionSymbol : DeclKind::PredicateSymbol, sig});
      } else {
        throw ParseError("unknown declaration '" + kw + "'", st.line, st.col);
      }
    }

    // Every binding must expand fully: catches cycles through Named references.
    for (const auto& name : out.schema.names())
      resolve_deep(types::named(name), out.schema);
  } catch (const ParseError& e) {
    throw SchemaError(origin + ": " + e.what());
  } catch (const CycleError& e) {
    throw CycleError(origin + ": " + e.what());
  } catch (const UnknownNameError& e) {
    throw UnknownNameError(origin + ": " + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError(origin + ": " + e.what());
  }
  return out;
}

SchemaFile load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw SchemaError("cannot open schema file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str(), path);
}

// --- resolution -------------------------------------------------------------

TypePtr resolve(const TypePtr& t, const Schema& schema) {
  TypePtr cur = t;
  std::vector<std::string> seen;
  while (const auto* named = cur->as<NamedType>()) {
    if (std::find(seen.begin(), seen.end(), named->name) != seen.end())
      throw CycleError("cyclic type definition through '" + named->name + "'");
    const TypePtr* bound = schema.lookup(named->name);
    if (!bound)
      throw UnknownNameError("unknown type name '" + named->name + "'");
    seen.push_back(named->name);
    cur = *bound;
  }
  return cur;
}

namespace {

TypePtr deep(const TypePtr& t, const Schema& schema, std::vector<std::string>& active,
             std::vector<std::string>& bound_vars) {
  return std::visit(
      [&](const auto& x) -> TypePtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NamedType>) {
          if (std::find(bound_vars.begin(), bound_vars.end(), x.name) != bound_vars.end())
            return t;
          if (std::find(active.begin(), active.end(), x.name) != active.end())
            throw CycleError("cyclic type definition through '" + x.name + "'");
          const TypePtr* binding = schema.lookup(x.name);
          if (!binding)
            throw UnknownNameError("unknown type name '" + x.name + "'");
          active.push_back(x.name);
          TypePtr out = deep(*binding, schema, active, bound_vars);
          active.pop_back();
          return out;
        } else if constexpr (std::is_same_v<T, RecordType>) {
          std::vector<RecordField> fields;
          fields.reserve(x.fields.size());
          for (const auto& f : x.fields)
            fields.push_back({f.label, deep(f.type, schema, active, bound_vars)});
          return std::make_shared<Type>(Type::Node{RecordType{std::move(fields)}});
        } else if constexpr (std::is_same_v<T, ConcreteType>) {
          std::vector<TypePtr> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args)
            args.push_back(deep(a, schema, active, bound_vars));
          return types::concrete(x.ctor, std::move(args), x.datatype);
        } else if constexpr (std::is_same_v<T, DepSumType>) {
          return types::dep_sum(x.var, deep(x.domain, schema, active, bound_vars),
                                deep(x.body, schema, active, bound_vars));
        } else if constexpr (std::is_same_v<T, DepProdType>) {
          return types::dep_prod(x.var, deep(x.domain, schema, active, bound_vars),
                                 deep(x.body, schema, active, bound_vars));
        } else if constexpr (std::is_same_v<T, BoundedSumType>) {
          auto b = deep(x.bound, schema, active, bound_vars);
          bound_vars.push_back(x.type_var);
          auto body = deep(x.body, schema, active, bound_vars);
          bound_vars.pop_back();
          return types::bounded_sum(x.type_var, std::move(b), std::move(body));
        } else if constexpr (std::is_same_v<T, BoundedProdType>) {
          auto b = deep(x.bound, schema, active, bound_vars);
          bound_vars.push_back(x.type_var);
          auto body = deep(x.body, schema, active, bound_vars);
          bound_vars.pop_back();
          return types::bounded_prod(x.type_var, std::move(b), std::move(body));
        } else if constexpr (std::is_same_v<T, ArrowType>) {
          std::vector<TypePtr> params;
          params.reserve(x.params.size());
          for (const auto& p : x.params)
            params.push_back(deep(p, schema, active, bound_vars));
          return types::arrow(std::move(params), deep(x.result, schema, active, bound_vars));
        } else {
          return t;  // primitives, enumerations, embedded propositions
        }
      },
      t->node());
}

}  // namespace

TypePtr resolve_deep(const TypePtr& t, const Schema& schema) {
  std::vector<std::string> active;
  std::vector<std::string> bound_vars;
  return deep(t, schema, active, bound_vars);
}

}  // namespace ttiq
