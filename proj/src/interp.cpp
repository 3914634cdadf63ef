#include "ttiq/interp.hpp"

#include <algorithm>

#include "ttiq/printer.hpp"

namespace ttiq {

// --- registry -----------------------------------------------------------------

SymbolRegistry SymbolRegistry::with_builtins() {
  SymbolRegistry reg;
  RegisteredSymbol eq;
  eq.signature = types::arrow({types::string_(), types::string_()}, types::boolean());
  eq.procedure = [](const std::vector<TermPtr>& args) -> TermPtr {
    return terms::boolean(equal(args.at(0), args.at(1)));
  };
  eq.polymorphic_args = true;
  reg.symbols_.emplace("==", std::move(eq));
  return reg;
}

SymbolRegistry SymbolRegistry::register_symbol(const std::string& name, TypePtr signature,
                                               HostProcedure procedure) const {
  if (symbols_.count(name))
    throw RegistryError("symbol '" + name + "' is already registered");
  const auto* arrow = signature ? signature->as<ArrowType>() : nullptr;
  if (!arrow || !arrow->result->is<PrimitiveType>())
    throw RegistryError("symbol '" + name +
                        "' needs a signature T1 * ... * Tn -> P with P primitive");
  SymbolRegistry out = *this;
  out.symbols_.emplace(name, RegisteredSymbol{std::move(signature), std::move(procedure), false});
  return out;
}

const RegisteredSymbol* SymbolRegistry::lookup(std::string_view name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

// --- evaluation -----------------------------------------------------------------

namespace {

// Shallow membership used for signature checks during evaluation; Named types
// pass when no schema is available for expansion.
bool fits(const TermPtr& t, const TypePtr& type, const Schema* schema) {
  TypePtr resolved = type;
  if (schema) {
    try {
      resolved = resolve(type, *schema);
    } catch (const SchemaError&) {
      return false;
    }
  } else if (type->is<NamedType>()) {
    return true;
  }
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PrimitiveType>) {
          switch (x.kind) {
            case Prim::String: return t->is<StrLit>();
            case Prim::Num: return t->is<NumLit>();
            case Prim::Bool: return t->is<BoolLit>();
            case Prim::Uri: return t->is<UriLit>();
            case Prim::Date: return t->is<DateLit>();
          }
          return false;
        } else if constexpr (std::is_same_v<T, EnumeratedType>) {
          const auto* s = t->as<StrLit>();
          return s && std::find(x.values.begin(), x.values.end(), s->value) != x.values.end();
        } else if constexpr (std::is_same_v<T, RecordType>) {
          const auto* rec = t->as<RecordTerm>();
          if (!rec || rec->fields.size() != x.fields.size())
            return false;
          for (const auto& field : x.fields) {
            const auto* got = rec->find(field.label);
            if (!got || !fits(got->value, field.type, schema))
              return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ConcreteType>) {
          const auto* app = t->as<CtorApp>();
          if (!app || app->ctor != x.ctor || app->args.size() != x.args.size())
            return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!fits(app->args[i], x.args[i], schema))
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, DepSumType>) {
          return t->is<PairTerm>();
        } else {
          return true;  // not spot-checkable without full membership machinery
        }
      },
      resolved->node());
}

}  // namespace

TermPtr eval(const TermPtr& t, const Bindings& bindings, const SymbolRegistry& reg,
             const Schema* schema) {
  return std::visit(
      [&](const auto& x) -> TermPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, VarTerm>) {
          auto it = bindings.find(x.name);
          if (it == bindings.end())
            throw EvalError("unbound variable '" + x.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, RecordTerm>) {
          std::vector<TermField> fields;
          fields.reserve(x.fields.size());
          for (const auto& f : x.fields)
            fields.push_back({f.label, eval(f.value, bindings, reg, schema)});
          return terms::record(std::move(fields));
        } else if constexpr (std::is_same_v<T, CtorApp>) {
          std::vector<TermPtr> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args)
            args.push_back(eval(a, bindings, reg, schema));
          return terms::ctor_app(x.ctor, std::move(args));
        } else if constexpr (std::is_same_v<T, PairTerm>) {
          return terms::pair(eval(x.first, bindings, reg, schema),
                             eval(x.second, bindings, reg, schema));
        } else if constexpr (std::is_same_v<T, Select>) {
          TermPtr target = eval(x.target, bindings, reg, schema);
          const auto* rec = target->as<RecordTerm>();
          if (!rec)
            throw EvalError("selection '." + x.label + "' applied to a non-record value");
          const auto* field = rec->find(x.label);
          if (!field)
            throw EvalError("record has no field '" + x.label + "'");
          return field->value;
        } else if constexpr (std::is_same_v<T, SymApp>) {
          const RegisteredSymbol* sym = reg.lookup(x.symbol);
          if (!sym)
            throw EvalError("unknown symbol '" + x.symbol + "'");
          const auto* arrow = sym->signature->as<ArrowType>();
          std::vector<TermPtr> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args)
            args.push_back(eval(a, bindings, reg, schema));
          if (arrow && args.size() != arrow->params.size())
            throw EvalError("symbol '" + x.symbol + "' expects " +
                            std::to_string(arrow->params.size()) + " arguments, got " +
                            std::to_string(args.size()));
          if (arrow && !sym->polymorphic_args) {
            for (std::size_t i = 0; i < args.size(); ++i)
              if (!fits(args[i], arrow->params[i], schema))
                throw EvalError("argument " + std::to_string(i + 1) + " of '" + x.symbol +
                                "' does not match its signature: " + format_term(args[i]));
          }
          TermPtr result = sym->procedure(args);
          if (arrow && !fits(result, arrow->result, schema))
            throw EvalError("result of '" + x.symbol + "' does not inhabit its declared type");
          return result;
        } else {
          return t;  // literal
        }
      },
      t->node());
}

// --- membership -----------------------------------------------------------------

namespace {

struct Checker {
  const Environment& env;
  const SymbolRegistry& reg;
  const Schema& schema;
  std::vector<std::string> trace;

  void note(int depth, const std::string& line) { trace.push_back(std::string(depth * 2, ' ') + line); }

  bool check(const TermPtr& t, const TypePtr& type, Bindings& binds, int depth) {
    TypePtr resolved = resolve(type, schema);
    note(depth, format_term(t) + " in " + format_type(resolved));
    bool ok = dispatch(t, resolved, binds, depth);
    note(depth, ok ? "ok" : "fail");
    return ok;
  }

  bool dispatch(const TermPtr& t, const TypePtr& type, Bindings& binds, int depth) {
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PrimitiveType>) {
            switch (x.kind) {
              case Prim::String: return t->is<StrLit>();
              case Prim::Num: return t->is<NumLit>();
              case Prim::Bool: return t->is<BoolLit>();
              case Prim::Uri: return t->is<UriLit>();
              case Prim::Date: return t->is<DateLit>();
            }
            return false;
          } else if constexpr (std::is_same_v<T, EnumeratedType>) {
            const auto* s = t->as<StrLit>();
            if (!s) {
              note(depth + 1, "not a string literal");
              return false;
            }
            if (std::find(x.values.begin(), x.values.end(), s->value) == x.values.end()) {
              note(depth + 1, "'" + s->value + "' is not an enumerated value");
              return false;
            }
            return true;
          } else if constexpr (std::is_same_v<T, RecordType>) {
            const auto* rec = t->as<RecordTerm>();
            if (!rec) {
              note(depth + 1, "not a record term");
              return false;
            }
            // exact label set: no implicit width subsumption
            if (rec->fields.size() != x.fields.size()) {
              note(depth + 1, "record has " + std::to_string(rec->fields.size()) +
                                  " fields, type expects " + std::to_string(x.fields.size()));
              return false;
            }
            for (const auto& field : x.fields) {
              const auto* got = rec->find(field.label);
              if (!got) {
                note(depth + 1, "missing field '" + field.label + "'");
                return false;
              }
              if (!check(got->value, field.type, binds, depth + 1))
                return false;
            }
            return true;
          } else if constexpr (std::is_same_v<T, ConcreteType>) {
            const auto* app = t->as<CtorApp>();
            if (!app) {
              note(depth + 1, "not a constructor application");
              return false;
            }
            if (app->ctor != x.ctor) {
              note(depth + 1, "constructor '" + app->ctor + "' is not '" + x.ctor + "'");
              return false;
            }
            if (app->args.size() != x.args.size()) {
              note(depth + 1, "constructor arity mismatch");
              return false;
            }
            for (std::size_t i = 0; i < x.args.size(); ++i)
              if (!check(app->args[i], x.args[i], binds, depth + 1))
                return false;
            return true;
          } else if constexpr (std::is_same_v<T, DepSumType>) {
            const auto* p = t->as<PairTerm>();
            if (!p) {
              note(depth + 1, "not a pair");
              return false;
            }
            if (!check(p->first, x.domain, binds, depth + 1))
              return false;
            auto saved = binds.find(x.var) != binds.end()
                             ? std::optional<TermPtr>(binds[x.var])
                             : std::nullopt;
            binds[x.var] = p->first;
            bool ok = check(p->second, x.body, binds, depth + 1);
            if (saved)
              binds[x.var] = *saved;
            else
              binds.erase(x.var);
            return ok;
          } else if constexpr (std::is_same_v<T, PropType>) {
            const auto* b = t->as<BoolLit>();
            if (!b || !b->value) {
              note(depth + 1, "proposition evidence must be the literal true");
              return false;
            }
            TermPtr verdict = eval(x.body, binds, reg, &schema);
            const auto* vb = verdict->as<BoolLit>();
            if (!vb)
              throw EvalError("proposition did not evaluate to a boolean: " +
                              format_term(x.body));
            if (!vb->value)
              note(depth + 1, "proposition evaluated to false");
            return vb->value;
          } else {
            note(depth + 1, "unsupported type form for ground membership");
            return false;
          }
        },
        type->node());
  }
};

}  // namespace

MembershipResult check_membership(const Environment& env, const TermPtr& t, const TypePtr& type,
                                  const SymbolRegistry& reg, const Schema& schema) {
  Checker checker{env, reg, schema, {}};
  Bindings binds;
  MembershipResult result;
  result.ok = checker.check(t, type, binds, 0);
  result.trace = std::move(checker.trace);
  return result;
}

}  // namespace ttiq
