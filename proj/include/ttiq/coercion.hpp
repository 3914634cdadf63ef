#ifndef TTIQ_COERCION_HPP
#define TTIQ_COERCION_HPP

#include <string>
#include <utility>
#include <vector>

#include "ttiq/ast.hpp"
#include "ttiq/prover.hpp"
#include "ttiq/schema.hpp"

namespace ttiq {

struct CoercionError : Error {
  using Error::Error;
};

// An executable order-preserving mapping between two types, extracted from a
// subtype proof. Extracted coercions mirror their proof tree node for node;
// Seq nodes appear only through compose.
struct Coercion {
  enum class Kind {
    Identity,
    PrimToString,       // date/uri/bool/string rendered as a string
    NumToStringPadded,  // natural number, left-padded with zeroes to `pad_width`
    BoolToNum,          // false -> 0, true -> 1
    Record,             // per-field mapping; unmatched source fields dropped
    SumProject,         // (witness, evidence) -> inner(witness)
    CtorMap,            // c(t1..tn) -> c'(k1(t1)..kn(tn))
    Seq,                // children[1] after children[0]
  };

  Kind kind = Kind::Identity;
  Prim prim_from = Prim::String;                            // PrimToString
  int pad_width = 0;                                        // NumToStringPadded
  std::vector<std::size_t> matching;                        // Record: sup pos -> sub pos
  std::vector<std::pair<std::string, std::string>> relabels;  // Record: (from, to) per sup pos
  std::string from_ctor, to_ctor;                           // CtorMap
  std::vector<Coercion> children;  // Record/CtorMap per-field, SumProject[0], Seq[0..1]

  TypePtr source;
  TypePtr target;
};

// Default width for the num -> string padding coercion.
inline constexpr int kDefaultPadWidth = 20;

// Node-by-node translation of a checked proof per the coercion construction
// table. pad_width fills NumToStringPadded unless the proof carries a hint.
Coercion extract(const ProofTree& proof, int pad_width = kDefaultPadWidth);

// Applies the coercion; the result inhabits the target type whenever the input
// inhabits the source type. Throws CoercionError on input shape mismatches, on
// negative numbers under padding, and on numbers wider than the pad width.
TermPtr apply(const Coercion& k, const TermPtr& t);

// Sequential composition; first's target must equal second's source.
Coercion compose(const Coercion& first, const Coercion& second);

enum class OrderResult { LessOrEqual, GreaterOrEqual, Equal, Incomparable };

std::string_view order_name(OrderResult r);

// The natural partial ordering of type T, decided for two of its inhabitants:
// numeric order on num, code-point lexicographic order on string and uri,
// false before true on bool, chronological order on date, declaration order on
// enumerations, product order on records and constructor applications,
// first-component order on pairs. Throws CoercionError when the terms do not
// fit the type.
OrderResult natural_leq(const TypePtr& type, const TermPtr& a, const TermPtr& b,
                        const Schema& schema);

// Stable indented text form for CLI inspection.
std::string format_coercion(const Coercion& k);

// One-line summary used in query provenance.
std::string summarize_coercion(const Coercion& k);

}  // namespace ttiq

#endif
