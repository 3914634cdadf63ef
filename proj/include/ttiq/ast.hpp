#ifndef TTIQ_AST_HPP
#define TTIQ_AST_HPP

#include <compare>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ttiq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arbitrary-precision integer, stored as canonical decimal digits.
// Only the operations the term language needs: parse, print, compare.
class BigInt {
public:
  BigInt() = default;

  static BigInt from_string(std::string_view text);  // throws std::invalid_argument
  static BigInt from_int(long long value);

  bool negative() const { return negative_; }
  bool is_zero() const { return digits_ == "0"; }
  // Digits without sign or leading zeros; "0" for zero.
  const std::string& digits() const { return digits_; }
  std::size_t digit_count() const { return digits_.size(); }

  std::string str() const;

  std::strong_ordering operator<=>(const BigInt& other) const;
  bool operator==(const BigInt& other) const = default;

private:
  bool negative_ = false;
  std::string digits_ = "0";
};

// Proleptic Gregorian calendar date, years 0..9999.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static bool valid(int year, int month, int day);
  static Date make(int year, int month, int day);  // throws std::invalid_argument

  std::string iso() const;  // YYYY-MM-DD, zero padded

  auto operator<=>(const Date&) const = default;
};

enum class Prim { String, Num, Bool, Uri, Date };

std::string_view prim_name(Prim kind);
std::optional<Prim> prim_from_name(std::string_view name);

class Type;
class Term;
using TypePtr = std::shared_ptr<const Type>;
using TermPtr = std::shared_ptr<const Term>;

// --- type nodes -------------------------------------------------------------

struct PrimitiveType {
  Prim kind;
};

struct EnumeratedType {
  std::vector<std::string> values;  // non-empty, duplicate-free
};

struct RecordField {
  std::string label;
  TypePtr type;
};

struct RecordType {
  std::vector<RecordField> fields;  // labels pairwise distinct

  const RecordField* find(std::string_view label) const;
};

// Concrete datatype: ctor of T1 * ... * Tn -> datatype.
// By convention ctor and datatype carry the same name.
struct ConcreteType {
  std::string ctor;
  std::vector<TypePtr> args;
  std::string datatype;
};

struct DepSumType {
  std::string var;
  TypePtr domain;
  TypePtr body;
};

struct DepProdType {
  std::string var;
  TypePtr domain;
  TypePtr body;
};

struct BoundedSumType {
  std::string type_var;
  TypePtr bound;
  TypePtr body;
};

struct BoundedProdType {
  std::string type_var;
  TypePtr bound;
  TypePtr body;
};

// Signature form T1 * ... * Tn -> R.
struct ArrowType {
  std::vector<TypePtr> params;
  TypePtr result;
};

// A term of type bool used in type position; denotes a proposition.
struct PropType {
  TermPtr body;
};

// Reference to a schema-defined type.
struct NamedType {
  std::string name;
};

class Type {
public:
  using Node = std::variant<PrimitiveType, EnumeratedType, RecordType, ConcreteType,
                            DepSumType, DepProdType, BoundedSumType, BoundedProdType,
                            ArrowType, PropType, NamedType>;

  explicit Type(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node_);
  }

private:
  Node node_;
};

// --- term nodes -------------------------------------------------------------

struct StrLit {
  std::string value;
};

struct NumLit {
  BigInt value;
};

struct BoolLit {
  bool value;
};

struct DateLit {
  Date value;
};

struct UriLit {
  std::string value;  // text inside the angle brackets
};

struct VarTerm {
  std::string name;
};

struct TermField {
  std::string label;
  TermPtr value;
};

struct RecordTerm {
  std::vector<TermField> fields;  // labels pairwise distinct

  const TermField* find(std::string_view label) const;
};

struct CtorApp {
  std::string ctor;
  std::vector<TermPtr> args;
};

// Record selection t.label.
struct Select {
  TermPtr target;
  std::string label;
};

// Function or predicate symbol application.
struct SymApp {
  std::string symbol;
  std::vector<TermPtr> args;
};

// Dependent-sum inhabitant; tuples nest to the right.
struct PairTerm {
  TermPtr first;
  TermPtr second;
};

class Term {
public:
  using Node = std::variant<StrLit, NumLit, BoolLit, DateLit, UriLit, VarTerm,
                            RecordTerm, CtorApp, Select, SymApp, PairTerm>;

  explicit Term(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node_);
  }

private:
  Node node_;
};

// --- constructors -----------------------------------------------------------

namespace types {

TypePtr prim(Prim kind);
TypePtr string_();
TypePtr num();
TypePtr boolean();
TypePtr uri();
TypePtr date();
TypePtr enumerated(std::vector<std::string> values);
TypePtr record(std::vector<RecordField> fields);
TypePtr concrete(std::string ctor, std::vector<TypePtr> args, std::string datatype = "");
TypePtr dep_sum(std::string var, TypePtr domain, TypePtr body);
TypePtr dep_prod(std::string var, TypePtr domain, TypePtr body);
TypePtr bounded_sum(std::string type_var, TypePtr bound, TypePtr body);
TypePtr bounded_prod(std::string type_var, TypePtr bound, TypePtr body);
TypePtr arrow(std::vector<TypePtr> params, TypePtr result);
TypePtr prop(TermPtr body);
TypePtr named(std::string name);

}  // namespace types

namespace terms {

TermPtr str(std::string value);
TermPtr num(BigInt value);
TermPtr num(long long value);
TermPtr boolean(bool value);
TermPtr date(Date value);
TermPtr date(int year, int month, int day);
TermPtr uri(std::string value);
TermPtr var(std::string name);
TermPtr record(std::vector<TermField> fields);
TermPtr ctor_app(std::string ctor, std::vector<TermPtr> args);
TermPtr select(TermPtr target, std::string label);
TermPtr sym_app(std::string symbol, std::vector<TermPtr> args);
TermPtr pair(TermPtr first, TermPtr second);

}  // namespace terms

// --- structural equality ----------------------------------------------------

bool equal(const Type& a, const Type& b);
bool equal(const Term& a, const Term& b);
bool equal(const TypePtr& a, const TypePtr& b);
bool equal(const TermPtr& a, const TermPtr& b);

bool is_prim(const TypePtr& t, Prim kind);

// Replaces free occurrences of Named(name); bounded quantifiers binding the
// same name shadow it.
TypePtr subst_named(const TypePtr& t, const std::string& name, const TypePtr& replacement);

}  // namespace ttiq

#endif
