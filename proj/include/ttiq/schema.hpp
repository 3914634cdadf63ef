#ifndef TTIQ_SCHEMA_HPP
#define TTIQ_SCHEMA_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ttiq/ast.hpp"

namespace ttiq {

struct SchemaError : Error {
  using Error::Error;
};

struct UnknownNameError : SchemaError {
  using SchemaError::SchemaError;
};

struct CycleError : SchemaError {
  using SchemaError::SchemaError;
};

enum class DeclKind { Variable, FunctionSymbol, PredicateSymbol, Ctor };

struct Declaration {
  std::string name;
  DeclKind kind;
  TypePtr type;
};

// Sequence of declarations; the Gamma of subtype and type judgments.
class Environment {
public:
  Environment() = default;

  // Validates the declaration's signature form:
  //   function symbols  T1 * ... * Tn -> P with P primitive,
  //   predicate symbols T1 * ... * Tn -> bool,
  //   constructors      T1 * ... * Tn -> C with C a datatype name.
  Environment extended(Declaration decl) const;

  const Declaration* lookup(std::string_view name) const;
  bool is_symbol(std::string_view name) const;  // function or predicate symbol
  const std::vector<Declaration>& declarations() const { return decls_; }

private:
  std::vector<Declaration> decls_;
};

// Immutable name -> type bindings loaded from a schema file.
class Schema {
public:
  Schema add(std::string name, TypePtr type) const;  // throws SchemaError on duplicate
  const TypePtr* lookup(std::string_view name) const;
  std::vector<std::string> names() const;  // sorted
  bool empty() const { return bindings_.empty(); }

private:
  std::map<std::string, TypePtr, std::less<>> bindings_;
};

struct SchemaFile {
  Schema schema;
  Environment env;
};

// Schema file syntax, one declaration per `;`-terminated statement:
//   type <Name> = <type-expr> ;
//   ctor <name> of <T1> * ... * <Tn> -> <C> ;
//   fn <name> : <T1> * ... * <Tn> -> <P> ;
//   pred <name> : <T1> * ... * <Tn> -> bool ;
// `#` starts a comment. Constructor declarations also bind the datatype
// name C to the concrete type they introduce.
SchemaFile parse_schema(std::string_view text, const std::string& origin = "<schema>");
SchemaFile load_schema(const std::string& path);

// Expands head Named references until a structural type appears.
TypePtr resolve(const TypePtr& t, const Schema& schema);

// Expands every Named reference recursively; terminates for acyclic schemas
// and reports a CycleError otherwise.
TypePtr resolve_deep(const TypePtr& t, const Schema& schema);

}  // namespace ttiq

#endif
