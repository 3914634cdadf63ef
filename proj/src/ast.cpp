#include "ttiq/ast.hpp"

#include <algorithm>
#include <set>

namespace ttiq {

// --- BigInt -----------------------------------------------------------------

BigInt BigInt::from_string(std::string_view text) {
  BigInt out;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    out.negative_ = text[i] == '-';
    ++i;
  }
  if (i == text.size())
    throw std::invalid_argument("empty integer literal");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      throw std::invalid_argument("invalid integer literal: " + std::string(text));
  while (i + 1 < text.size() && text[i] == '0')
    ++i;
  out.digits_.assign(text.substr(i));
  if (out.digits_ == "0")
    out.negative_ = false;
  return out;
}

BigInt BigInt::from_int(long long value) {
  return from_string(std::to_string(value));
}

std::string BigInt::str() const {
  return negative_ ? "-" + digits_ : digits_;
}

std::strong_ordering BigInt::operator<=>(const BigInt& other) const {
  if (negative_ != other.negative_)
    return negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
  auto magnitude = [](const std::string& a, const std::string& b) {
    if (a.size() != b.size())
      return a.size() < b.size() ? std::strong_ordering::less : std::strong_ordering::greater;
    int c = a.compare(b);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  };
  auto mag = magnitude(digits_, other.digits_);
  if (!negative_)
    return mag;
  if (mag == std::strong_ordering::less) return std::strong_ordering::greater;
  if (mag == std::strong_ordering::greater) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

// --- Date -------------------------------------------------------------------

static bool leap_year(int y) {
  return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

bool Date::valid(int year, int month, int day) {
  if (year < 0 || year > 9999 || month < 1 || month > 12 || day < 1)
    return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = days[month - 1];
  if (month == 2 && leap_year(year))
    max_day = 29;
  return day <= max_day;
}

Date Date::make(int year, int month, int day) {
  if (!valid(year, month, day))
    throw std::invalid_argument("invalid calendar date");
  return Date{year, month, day};
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

// --- primitives -------------------------------------------------------------

std::string_view prim_name(Prim kind) {
  switch (kind) {
    case Prim::String: return "string";
    case Prim::Num: return "num";
    case Prim::Bool: return "bool";
    case Prim::Uri: return "uri";
    case Prim::Date: return "date";
  }
  return "?";
}

std::optional<Prim> prim_from_name(std::string_view name) {
  if (name == "string") return Prim::String;
  if (name == "num") return Prim::Num;
  if (name == "bool") return Prim::Bool;
  if (name == "uri") return Prim::Uri;
  if (name == "date") return Prim::Date;
  return std::nullopt;
}

const RecordField* RecordType::find(std::string_view label) const {
  for (const auto& f : fields)
    if (f.label == label)
      return &f;
  return nullptr;
}

const TermField* RecordTerm::find(std::string_view label) const {
  for (const auto& f : fields)
    if (f.label == label)
      return &f;
  return nullptr;
}

// --- constructors -----------------------------------------------------------

namespace types {

static TypePtr make(Type::Node node) {
  return std::make_shared<Type>(std::move(node));
}

TypePtr prim(Prim kind) { return make(PrimitiveType{kind}); }
TypePtr string_() { return prim(Prim::String); }
TypePtr num() { return prim(Prim::Num); }
TypePtr boolean() { return prim(Prim::Bool); }
TypePtr uri() { return prim(Prim::Uri); }
TypePtr date() { return prim(Prim::Date); }

TypePtr enumerated(std::vector<std::string> values) {
  if (values.empty())
    throw std::invalid_argument("enumerated type needs at least one value");
  std::set<std::string_view> seen;
  for (const auto& v : values)
    if (!seen.insert(v).second)
      throw std::invalid_argument("duplicate enumerated value: " + v);
  return make(EnumeratedType{std::move(values)});
}

TypePtr record(std::vector<RecordField> fields) {
  std::set<std::string_view> seen;
  for (const auto& f : fields)
    if (!seen.insert(f.label).second)
      throw std::invalid_argument("duplicate record label: " + f.label);
  return make(RecordType{std::move(fields)});
}

TypePtr concrete(std::string ctor, std::vector<TypePtr> args, std::string datatype) {
  if (datatype.empty())
    datatype = ctor;
  return make(ConcreteType{std::move(ctor), std::move(args), std::move(datatype)});
}

TypePtr dep_sum(std::string var, TypePtr domain, TypePtr body) {
  return make(DepSumType{std::move(var), std::move(domain), std::move(body)});
}

TypePtr dep_prod(std::string var, TypePtr domain, TypePtr body) {
  return make(DepProdType{std::move(var), std::move(domain), std::move(body)});
}

TypePtr bounded_sum(std::string type_var, TypePtr bound, TypePtr body) {
  return make(BoundedSumType{std::move(type_var), std::move(bound), std::move(body)});
}

TypePtr bounded_prod(std::string type_var, TypePtr bound, TypePtr body) {
  return make(BoundedProdType{std::move(type_var), std::move(bound), std::move(body)});
}

TypePtr arrow(std::vector<TypePtr> params, TypePtr result) {
  return make(ArrowType{std::move(params), std::move(result)});
}

TypePtr prop(TermPtr body) { return make(PropType{std::move(body)}); }
TypePtr named(std::string name) { return make(NamedType{std::move(name)}); }

}  // namespace types

namespace terms {

static TermPtr make(Term::Node node) {
  return std::make_shared<Term>(std::move(node));
}

TermPtr str(std::string value) { return make(StrLit{std::move(value)}); }
TermPtr num(BigInt value) { return make(NumLit{std::move(value)}); }
TermPtr num(long long value) { return make(NumLit{BigInt::from_int(value)}); }
TermPtr boolean(bool value) { return make(BoolLit{value}); }
TermPtr date(Date value) { return make(DateLit{value}); }
TermPtr date(int year, int month, int day) { return make(DateLit{Date::make(year, month, day)}); }
TermPtr uri(std::string value) { return make(UriLit{std::move(value)}); }
TermPtr var(std::string name) { return make(VarTerm{std::move(name)}); }

TermPtr record(std::vector<TermField> fields) {
  std::set<std::string_view> seen;
  for (const auto& f : fields)
    if (!seen.insert(f.label).second)
      throw std::invalid_argument("duplicate record label: " + f.label);
  return make(RecordTerm{std::move(fields)});
}

TermPtr ctor_app(std::string ctor, std::vector<TermPtr> args) {
  return make(CtorApp{std::move(ctor), std::move(args)});
}

TermPtr select(TermPtr target, std::string label) {
  return make(Select{std::move(target), std::move(label)});
}

TermPtr sym_app(std::string symbol, std::vector<TermPtr> args) {
  return make(SymApp{std::move(symbol), std::move(args)});
}

TermPtr pair(TermPtr first, TermPtr second) {
  return make(PairTerm{std::move(first), std::move(second)});
}

}  // namespace terms

// --- structural equality ----------------------------------------------------

static bool equal_types(const std::vector<TypePtr>& a, const std::vector<TypePtr>& b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i]))
      return false;
  return true;
}

static bool equal_terms(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i]))
      return false;
  return true;
}

bool equal(const Type& a, const Type& b) {
  if (a.node().index() != b.node().index())
    return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, PrimitiveType>) {
          return x.kind == y.kind;
        } else if constexpr (std::is_same_v<T, EnumeratedType>) {
          return x.values == y.values;
        } else if constexpr (std::is_same_v<T, RecordType>) {
          if (x.fields.size() != y.fields.size())
            return false;
          for (std::size_t i = 0; i < x.fields.size(); ++i)
            if (x.fields[i].label != y.fields[i].label ||
                !equal(x.fields[i].type, y.fields[i].type))
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, ConcreteType>) {
          return x.ctor == y.ctor && x.datatype == y.datatype && equal_types(x.args, y.args);
        } else if constexpr (std::is_same_v<T, DepSumType> || std::is_same_v<T, DepProdType>) {
          return x.var == y.var && equal(x.domain, y.domain) && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, BoundedSumType> ||
                             std::is_same_v<T, BoundedProdType>) {
          return x.type_var == y.type_var && equal(x.bound, y.bound) && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, ArrowType>) {
          return equal_types(x.params, y.params) && equal(x.result, y.result);
        } else if constexpr (std::is_same_v<T, PropType>) {
          return equal(x.body, y.body);
        } else {
          static_assert(std::is_same_v<T, NamedType>);
          return x.name == y.name;
        }
      },
      a.node());
}

bool equal(const Term& a, const Term& b) {
  if (a.node().index() != b.node().index())
    return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, StrLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, NumLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, DateLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, UriLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, VarTerm>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, RecordTerm>) {
          if (x.fields.size() != y.fields.size())
            return false;
          for (std::size_t i = 0; i < x.fields.size(); ++i)
            if (x.fields[i].label != y.fields[i].label ||
                !equal(x.fields[i].value, y.fields[i].value))
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, CtorApp>) {
          return x.ctor == y.ctor && equal_terms(x.args, y.args);
        } else if constexpr (std::is_same_v<T, Select>) {
          return x.label == y.label && equal(x.target, y.target);
        } else if constexpr (std::is_same_v<T, SymApp>) {
          return x.symbol == y.symbol && equal_terms(x.args, y.args);
        } else {
          static_assert(std::is_same_v<T, PairTerm>);
          return equal(x.first, y.first) && equal(x.second, y.second);
        }
      },
      a.node());
}

bool equal(const TypePtr& a, const TypePtr& b) {
  if (a == b)
    return true;
  if (!a || !b)
    return false;
  return equal(*a, *b);
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b)
    return true;
  if (!a || !b)
    return false;
  return equal(*a, *b);
}

bool is_prim(const TypePtr& t, Prim kind) {
  const auto* p = t ? t->as<PrimitiveType>() : nullptr;
  return p && p->kind == kind;
}

TypePtr subst_named(const TypePtr& t, const std::string& name, const TypePtr& replacement) {
  return std::visit(
      [&](const auto& x) -> TypePtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NamedType>) {
          return x.name == name ? replacement : t;
        } else if constexpr (std::is_same_v<T, RecordType>) {
          std::vector<RecordField> fields;
          fields.reserve(x.fields.size());
          for (const auto& f : x.fields)
            fields.push_back({f.label, subst_named(f.type, name, replacement)});
          return std::make_shared<Type>(Type::Node{RecordType{std::move(fields)}});
        } else if constexpr (std::is_same_v<T, ConcreteType>) {
          std::vector<TypePtr> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args)
            args.push_back(subst_named(a, name, replacement));
          return types::concrete(x.ctor, std::move(args), x.datatype);
        } else if constexpr (std::is_same_v<T, DepSumType>) {
          return types::dep_sum(x.var, subst_named(x.domain, name, replacement),
                                subst_named(x.body, name, replacement));
        } else if constexpr (std::is_same_v<T, DepProdType>) {
          return types::dep_prod(x.var, subst_named(x.domain, name, replacement),
                                 subst_named(x.body, name, replacement));
        } else if constexpr (std::is_same_v<T, BoundedSumType>) {
          auto bound = subst_named(x.bound, name, replacement);
          auto body = x.type_var == name ? x.body : subst_named(x.body, name, replacement);
          return types::bounded_sum(x.type_var, std::move(bound), std::move(body));
        } else if constexpr (std::is_same_v<T, BoundedProdType>) {
          auto bound = subst_named(x.bound, name, replacement);
          auto body = x.type_var == name ? x.body : subst_named(x.body, name, replacement);
          return types::bounded_prod(x.type_var, std::move(bound), std::move(body));
        } else if constexpr (std::is_same_v<T, ArrowType>) {
          std::vector<TypePtr> params;
          params.reserve(x.params.size());
          for (const auto& p : x.params)
            params.push_back(subst_named(p, name, replacement));
          return types::arrow(std::move(params), subst_named(x.result, name, replacement));
        } else {
          // primitives, enumerations and embedded propositions have no type names
          return t;
        }
      },
      t->node());
}

}  // namespace ttiq
