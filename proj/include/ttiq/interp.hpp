#ifndef TTIQ_INTERP_HPP
#define TTIQ_INTERP_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ttiq/ast.hpp"
#include "ttiq/schema.hpp"

namespace ttiq {

struct EvalError : Error {
  using Error::Error;
};

struct RegistryError : Error {
  using Error::Error;
};

// Host-provided implementation of a function or predicate symbol. Receives
// evaluated argument terms; must be total and reentrant.
using HostProcedure = std::function<TermPtr(const std::vector<TermPtr>&)>;

struct RegisteredSymbol {
  TypePtr signature;  // arrow form with a primitive (or bool) result
  HostProcedure procedure;
  // The built-in equality accepts any pair of ground terms; declared symbols
  // have their arguments checked against the signature.
  bool polymorphic_args = false;
};

// The external interpreter's symbol table. Snapshots are immutable;
// registration produces a new registry.
class SymbolRegistry {
public:
  // Registry with `==` registered at string * string -> bool, implemented as
  // structural equality on ground terms.
  static SymbolRegistry with_builtins();

  SymbolRegistry register_symbol(const std::string& name, TypePtr signature,
                                 HostProcedure procedure) const;

  const RegisteredSymbol* lookup(std::string_view name) const;

private:
  std::map<std::string, RegisteredSymbol, std::less<>> symbols_;
};

using Bindings = std::map<std::string, TermPtr>;

// Call-by-value normalization: selections reduce against record values, symbol
// applications reduce through the registry. Throws EvalError on unbound
// variables, missing labels, unknown symbols and signature mismatches.
TermPtr eval(const TermPtr& t, const Bindings& bindings, const SymbolRegistry& reg,
             const Schema* schema = nullptr);

struct MembershipResult {
  bool ok = false;
  std::vector<std::string> trace;

  explicit operator bool() const { return ok; }
};

// Ground type membership env |- t in T. Record membership requires the exact
// label set: a term never implicitly inhabits a wider record type; conversion
// goes through coercions. Embedded propositions check by evaluating to true
// under the bindings accumulated from enclosing dependent sums.
MembershipResult check_membership(const Environment& env, const TermPtr& t, const TypePtr& type,
                                  const SymbolRegistry& reg, const Schema& schema);

}  // namespace ttiq

#endif
