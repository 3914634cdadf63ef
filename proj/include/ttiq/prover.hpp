#ifndef TTIQ_PROVER_HPP
#define TTIQ_PROVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "ttiq/ast.hpp"
#include "ttiq/schema.hpp"
#include "ttiq/taxonomy.hpp"

namespace ttiq {

enum class Rule {
  Identity,
  StrPrim,
  BoolNum,
  SynRec,
  SemRec,
  Concrete,
  ExistsFirst,
};

std::string_view rule_name(Rule rule);

// A subtype judgment env |- sub <= sup over fully resolved types.
struct Judgment {
  std::shared_ptr<const Environment> env;
  TypePtr sub;
  TypePtr sup;
};

struct ProofTree {
  Rule rule;
  Judgment conclusion;
  std::vector<ProofTree> premises;
  // For the record rules: supertype field position -> subtype field position.
  // Total on the supertype's fields and injective.
  std::vector<std::size_t> matching;
  // Optional width for the num -> string padding coercion.
  std::optional<int> pad_width_hint;
};

struct ProverLimits {
  int max_depth = 64;
  int max_proofs = 16;
};

enum class ProveOutcome {
  Proved,
  Refuted,         // no rule applies anywhere within the depth bound
  DepthExhausted,  // the search hit the depth bound before deciding
};

struct ProveResult {
  ProveOutcome outcome = ProveOutcome::Refuted;
  std::optional<ProofTree> proof;

  explicit operator bool() const { return outcome == ProveOutcome::Proved; }
};

// Proves env |- sub <= sup. Rules are tried in the fixed order IDENTITY,
// STR-PRIM, BOOL-NUM, SYN-REC, SEM-REC, CONCRETE, EXISTS-FIRST; record field
// matchings are explored supertype-field-major, subtype candidates
// left-to-right, so identical inputs always yield the identical first proof.
ProveResult prove(const Environment& env, const TypePtr& sub, const TypePtr& sup,
                  const Schema& schema, const Taxonomy& tax, const ProverLimits& limits = {});

// All distinct proofs (structural inequality of trees), up to
// limits.max_proofs, in the same deterministic order prove uses.
std::vector<ProofTree> enumerate_proofs(const Environment& env, const TypePtr& sub,
                                        const TypePtr& sup, const Schema& schema,
                                        const Taxonomy& tax, const ProverLimits& limits = {});

// Independent proof checker: true iff every node's conclusion follows from its
// premises by its named rule under the taxonomy. Serves as the oracle for the
// prover's soundness tests.
bool check_rule(const ProofTree& node, const Taxonomy& tax);

// Indented text form used by --explain; stable across releases.
std::string format_proof(const ProofTree& proof);

}  // namespace ttiq

#endif
