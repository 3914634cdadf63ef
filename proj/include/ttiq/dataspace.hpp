#ifndef TTIQ_DATASPACE_HPP
#define TTIQ_DATASPACE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ttiq/coercion.hpp"
#include "ttiq/interp.hpp"
#include "ttiq/parser.hpp"
#include "ttiq/prover.hpp"
#include "ttiq/schema.hpp"
#include "ttiq/taxonomy.hpp"

namespace ttiq {

struct DataspaceError : Error {
  using Error::Error;
};

struct TransportError : Error {
  using Error::Error;
};

struct AnalyticError : Error {
  using Error::Error;
};

// A registered contributor: where its terms live and which schema type they
// inhabit. Transport is a file path (optionally file:-prefixed) or an http://
// url; the payload is UTF-8 text with one term per line, # comments and blank
// lines skipped.
struct DataSource {
  std::string name;
  std::string schema_type;
  std::string transport;
};

// SELECT ?x FROM ?x a <target> [WHERE <condition>]
struct InstanceQuery {
  std::string var;
  std::string target;
  TermPtr condition;  // may be null
};

// SELECT ?X FROM ?X <= <bound> [WHERE <condition>]
struct BoundedQuery {
  std::string type_var;
  std::string bound;
  TermPtr condition;  // may be null
};

using Query = std::variant<InstanceQuery, BoundedQuery>;

struct PlanEntry {
  DataSource source;
  ProofTree proof;
  std::size_t proof_index = 0;
  Coercion coercion;
};

struct QueryPlan {
  std::string target;
  std::vector<PlanEntry> entries;  // ordered by source name
};

struct Provenance {
  std::string source;
  std::size_t proof_index = 0;
  std::string coercion;
};

struct ResultRow {
  TermPtr term;
  Provenance provenance;
};

struct SourceFailure {
  std::string source;
  std::string message;
};

struct QueryResult {
  std::vector<ResultRow> rows;
  std::vector<SourceFailure> failures;  // transport failures; other sources still answer
  std::vector<std::string> warnings;    // malformed or ill-typed rows, skipped
};

struct RegistrationReport {
  std::string source;
  // Subtype relations provable between the new source's schema type and the
  // other types the dataspace knows, as (sub, sup) name pairs.
  std::vector<std::pair<std::string, std::string>> relations;
};

// External procedure with a typed interface:
//   forall X <= U. forall x: T. (phi -> exists Y <= U'. forall y: T'. psi)
// Type variables are bound to their stated bounds at registration; the
// command runs under /bin/sh with the input term on stdin and one output term
// expected on stdout.
struct AnalyticManifest {
  std::string name;
  std::string command;
  TypePtr interface_type;
};

struct AnalyticInterface {
  std::string input_var;
  TypePtr input_type;
  TermPtr precondition;
  std::string output_var;
  TypePtr output_type;
  TermPtr postcondition;
};

// Validates the interface shape and binds its type variables.
AnalyticInterface analyze_interface(const TypePtr& type);

Query parse_query(std::string_view text, const ParseContext& ctx);

// The middle tier. State lives in a hand-editable manifest file:
//   schema <path>
//   taxonomy <path>
//   source <name> <TypeName> <transport>
//   select <source> <TargetType> <proofIndex>
//   analytic <name> "<command>" <interface-type>
// Paths are relative to the manifest's directory. register_source,
// select_coercion and register_analytic rewrite the manifest; mutations are
// serialized internally.
class Dataspace {
public:
  static Dataspace load(const std::string& state_path);

  const Schema& schema() const { return schema_; }
  const Environment& env() const { return env_; }
  const Taxonomy& taxonomy() const { return taxonomy_; }
  const SymbolRegistry& registry() const { return registry_; }
  const std::vector<DataSource>& sources() const { return sources_; }
  const std::vector<AnalyticManifest>& analytics() const { return analytics_; }
  ParseContext parse_context() const;

  // Proves the new type against every other type the space knows, caches the
  // proofs, stores the source and persists the state.
  RegistrationReport register_source(const DataSource& source, const ProverLimits& limits = {});

  QueryPlan plan(const Query& query, const ProverLimits& limits = {});
  QueryResult execute(const Query& query, const ProverLimits& limits = {}, bool dedupe = false);

  // Pins which of the enumerated proofs converts `source` rows to `target`.
  void select_coercion(const std::string& source, const std::string& target, std::size_t index,
                       const ProverLimits& limits = {});

  void register_analytic(const AnalyticManifest& manifest);
  TermPtr invoke_analytic(const std::string& name, const TermPtr& input);

  // Cached proof enumeration for sub <= sup, both schema type names.
  const std::vector<ProofTree>& proofs_between(const std::string& sub, const std::string& sup,
                                               const ProverLimits& limits = {});

private:
  Dataspace() = default;

  void save_locked() const;
  QueryPlan plan_locked(const std::string& target, const ProverLimits& limits);
  const std::vector<ProofTree>& proofs_locked(const std::string& sub, const std::string& sup,
                                              const ProverLimits& limits);
  std::string resolve_path(const std::string& token) const;

  std::string state_path_;
  std::string schema_token_;    // as written in the manifest
  std::string taxonomy_token_;  // as written in the manifest
  Schema schema_;
  Environment env_;
  Taxonomy taxonomy_;
  SymbolRegistry registry_ = SymbolRegistry::with_builtins();
  std::vector<DataSource> sources_;
  std::vector<AnalyticManifest> analytics_;
  std::map<std::pair<std::string, std::string>, std::size_t> selections_;
  std::map<std::pair<std::string, std::string>, std::vector<ProofTree>> proof_cache_;
  // behind a pointer so loaded dataspaces stay movable
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
};

// Fetches a transport's payload; file read or single http GET.
std::string fetch_transport(const std::string& transport, const std::string& base_dir);

struct ProcessResult {
  int exit_code = -1;
  std::string output;
};

// Runs `command` under /bin/sh -c with `input` on stdin, capturing stdout.
ProcessResult run_process(const std::string& command, const std::string& input);

}  // namespace ttiq

#endif
