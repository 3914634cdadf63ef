#include "ttiq/printer.hpp"

namespace ttiq {

namespace {

std::string quote(const std::string& s, char q) {
  std::string out(1, q);
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += q == '\'' ? "\\'" : "'"; break;
      case '"': out += q == '"' ? "\\\"" : "\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += q;
  return out;
}

void print_type(const Type& t, std::string& out);
void print_term(const Term& t, std::string& out);

// Record, arrow, quantifier, concrete and embedded-proposition types need
// parentheses when they appear as a component of a larger type.
bool composite(const Type& t) {
  return t.is<RecordType>() || t.is<ArrowType>() || t.is<ConcreteType>() ||
         t.is<DepSumType>() || t.is<DepProdType>() || t.is<BoundedSumType>() ||
         t.is<BoundedProdType>() || t.is<PropType>();
}

void print_component(const TypePtr& t, std::string& out) {
  if (composite(*t)) {
    out += '(';
    print_type(*t, out);
    out += ')';
  } else {
    print_type(*t, out);
  }
}

void print_type(const Type& t, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PrimitiveType>) {
          out += prim_name(x.kind);
        } else if constexpr (std::is_same_v<T, EnumeratedType>) {
          out += '{';
          for (std::size_t i = 0; i < x.values.size(); ++i) {
            if (i)
              out += ", ";
            out += quote(x.values[i], '\'');
          }
          out += '}';
        } else if constexpr (std::is_same_v<T, RecordType>) {
          for (std::size_t i = 0; i < x.fields.size(); ++i) {
            if (i)
              out += " * ";
            out += x.fields[i].label;
            out += ": ";
            print_component(x.fields[i].type, out);
          }
        } else if constexpr (std::is_same_v<T, ConcreteType>) {
          out += x.ctor;
          out += " of ";
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i)
              out += " * ";
            print_component(x.args[i], out);
          }
          out += " -> ";
          out += x.datatype;
        } else if constexpr (std::is_same_v<T, DepSumType> || std::is_same_v<T, DepProdType>) {
          out += std::is_same_v<T, DepSumType> ? "exists " : "forall ";
          out += x.var;
          out += ": ";
          print_component(x.domain, out);
          out += ". ";
          print_type(*x.body, out);
        } else if constexpr (std::is_same_v<T, BoundedSumType> ||
                             std::is_same_v<T, BoundedProdType>) {
          out += std::is_same_v<T, BoundedSumType> ? "exists " : "forall ";
          out += x.type_var;
          out += " <= ";
          print_component(x.bound, out);
          out += ". ";
          print_type(*x.body, out);
        } else if constexpr (std::is_same_v<T, ArrowType>) {
          for (std::size_t i = 0; i < x.params.size(); ++i) {
            if (i)
              out += " * ";
            print_component(x.params[i], out);
          }
          out += " -> ";
          const TypePtr& result = x.result;
          if (result->is<ArrowType>()) {
            print_type(*result, out);
          } else {
            print_component(result, out);
          }
        } else if constexpr (std::is_same_v<T, PropType>) {
          print_term(*x.body, out);
        } else {
          static_assert(std::is_same_v<T, NamedType>);
          out += x.name;
        }
      },
      t.node());
}

void print_select_target(const TermPtr& t, std::string& out) {
  // Postfix selection binds tightest; anything that is not already atomic
  // gets parenthesized.
  bool atomic = t->is<StrLit>() || t->is<NumLit>() || t->is<BoolLit>() || t->is<DateLit>() ||
                t->is<UriLit>() || t->is<VarTerm>() || t->is<CtorApp>() || t->is<Select>() ||
                t->is<SymApp>() || t->is<RecordTerm>() || t->is<PairTerm>();
  // RecordTerm and PairTerm print their own parentheses; SymApp of == does not.
  const auto* app = t->as<SymApp>();
  bool needs_paren = !atomic || (app && app->symbol == "==" && app->args.size() == 2);
  if (needs_paren) {
    out += '(';
    print_term(*t, out);
    out += ')';
  } else {
    print_term(*t, out);
  }
}

void print_term(const Term& t, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StrLit>) {
          out += quote(x.value, '"');
        } else if constexpr (std::is_same_v<T, NumLit>) {
          out += x.value.str();
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          out += x.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, DateLit>) {
          out += x.value.iso();
        } else if constexpr (std::is_same_v<T, UriLit>) {
          out += '<';
          out += x.value;
          out += '>';
        } else if constexpr (std::is_same_v<T, VarTerm>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, RecordTerm>) {
          out += '(';
          for (std::size_t i = 0; i < x.fields.size(); ++i) {
            if (i)
              out += ", ";
            out += x.fields[i].label;
            out += " = ";
            print_term(*x.fields[i].value, out);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, CtorApp>) {
          out += x.ctor;
          out += '(';
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i)
              out += ", ";
            print_term(*x.args[i], out);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, Select>) {
          print_select_target(x.target, out);
          out += '.';
          out += x.label;
        } else if constexpr (std::is_same_v<T, SymApp>) {
          if (x.symbol == "==" && x.args.size() == 2) {
            auto print_operand = [&](const TermPtr& arg) {
              const auto* inner = arg->as<SymApp>();
              if (inner && inner->symbol == "==" && inner->args.size() == 2) {
                out += '(';
                print_term(*arg, out);
                out += ')';
              } else {
                print_term(*arg, out);
              }
            };
            print_operand(x.args[0]);
            out += " == ";
            print_operand(x.args[1]);
          } else {
            out += x.symbol;
            out += '(';
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (i)
                out += ", ";
              print_term(*x.args[i], out);
            }
            out += ')';
          }
        } else {
          static_assert(std::is_same_v<T, PairTerm>);
          out += '(';
          print_term(*x.first, out);
          out += ", ";
          print_term(*x.second, out);
          out += ')';
        }
      },
      t.node());
}

}  // namespace

std::string format_type(const Type& t) {
  std::string out;
  print_type(t, out);
  return out;
}

std::string format_term(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

std::string format_type(const TypePtr& t) { return format_type(*t); }
std::string format_term(const TermPtr& t) { return format_term(*t); }

}  // namespace ttiq
