// ttiq - command line front end for the TTIQ type system and data space.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttiq/coercion.hpp"
#include "ttiq/dataspace.hpp"
#include "ttiq/interp.hpp"
#include "ttiq/parser.hpp"
#include "ttiq/printer.hpp"
#include "ttiq/prover.hpp"
#include "ttiq/schema.hpp"
#include "ttiq/taxonomy.hpp"

using namespace ttiq;

namespace {

// exit codes
constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kInputError = 2;
constexpr int kLimitExhausted = 3;
constexpr int kExternalFailure = 4;

struct CommonInputs {
  std::string schema_path;
  std::string taxonomy_path;

  SchemaFile load_schema_file() const {
    if (schema_path.empty())
      return SchemaFile{};
    return load_schema(schema_path);
  }

  Taxonomy load_taxonomy() const {
    if (taxonomy_path.empty())
      return Taxonomy{};
    return Taxonomy::load(taxonomy_path);
  }
};

ProveResult prove_pair(const SchemaFile& sf, const Taxonomy& tax, const std::string& sub_text,
                       const std::string& sup_text, const ProverLimits& limits) {
  auto ctx = make_context(sf.schema, sf.env);
  TypePtr sub = parse_type(sub_text, ctx);
  TypePtr sup = parse_type(sup_text, ctx);
  return prove(sf.env, sub, sup, sf.schema, tax, limits);
}

void print_query_result(const QueryResult& result) {
  for (const auto& row : result.rows) {
    std::cout << format_term(row.term) << "  # source=" << row.provenance.source
              << " proof=" << row.provenance.proof_index
              << " coercion=" << row.provenance.coercion << "\n";
  }
  for (const auto& warning : result.warnings)
    std::cerr << "warning: " << warning << "\n";
  for (const auto& failure : result.failures)
    std::cerr << "failure: " << failure.source << ": " << failure.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TTIQ type system and data space middle tier"};
  app.require_subcommand(1);

  std::string space_path;
  app.add_option("--space", space_path, "dataspace state file");

  CommonInputs common;
  ProverLimits limits;
  int pad_width = kDefaultPadWidth;
  bool explain = false;
  bool dedupe = false;
  int enumerate = 0;
  std::size_t proof_index = 0;

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse a type or term and print it back");
  std::string parse_what, parse_text;
  cmd_parse->add_option("kind", parse_what, "'type' or 'term'")->required();
  cmd_parse->add_option("text", parse_text)->required();
  cmd_parse->add_option("--schema", common.schema_path);

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a term to normal form");
  std::string eval_text;
  std::vector<std::string> eval_binds;
  cmd_eval->add_option("term", eval_text)->required();
  cmd_eval->add_option("--schema", common.schema_path);
  cmd_eval->add_option("--bind", eval_binds, "NAME=TERM, repeatable");

  // check
  auto* cmd_check = app.add_subcommand("check", "check ground type membership");
  std::string check_term, check_type;
  cmd_check->add_option("term", check_term)->required();
  cmd_check->add_option("type", check_type)->required();
  cmd_check->add_option("--schema", common.schema_path);
  cmd_check->add_flag("--explain", explain);

  // subtype
  auto* cmd_subtype = app.add_subcommand("subtype", "prove a subtype judgment");
  std::string sub_text, sup_text;
  cmd_subtype->add_option("sub", sub_text)->required();
  cmd_subtype->add_option("sup", sup_text)->required();
  cmd_subtype->add_option("--schema", common.schema_path);
  cmd_subtype->add_option("--taxonomy", common.taxonomy_path);
  cmd_subtype->add_flag("--explain", explain);
  cmd_subtype->add_option("--enumerate", enumerate, "list up to N proofs");
  cmd_subtype->add_option("--max-depth", limits.max_depth);
  cmd_subtype->add_option("--max-proofs", limits.max_proofs);

  // coerce
  auto* cmd_coerce = app.add_subcommand("coerce", "extract or apply a coercion");
  std::string coerce_mode, coerce_term;
  cmd_coerce->add_option("mode", coerce_mode, "'extract' or 'apply'")->required();
  cmd_coerce->add_option("sub", sub_text)->required();
  cmd_coerce->add_option("sup", sup_text)->required();
  cmd_coerce->add_option("term", coerce_term);
  cmd_coerce->add_option("--schema", common.schema_path);
  cmd_coerce->add_option("--taxonomy", common.taxonomy_path);
  cmd_coerce->add_option("--pad-width", pad_width);
  cmd_coerce->add_option("--proof-index", proof_index);
  cmd_coerce->add_option("--max-depth", limits.max_depth);
  cmd_coerce->add_option("--max-proofs", limits.max_proofs);

  // source
  auto* cmd_source = app.add_subcommand("source", "register or list data sources");
  std::string src_mode, src_name, src_type, src_transport;
  cmd_source->add_option("mode", src_mode, "'register' or 'list'")->required();
  cmd_source->add_option("name", src_name);
  cmd_source->add_option("type", src_type);
  cmd_source->add_option("transport", src_transport);

  // query
  auto* cmd_query = app.add_subcommand("query", "run a SELECT query");
  std::string query_text;
  cmd_query->add_option("text", query_text)->required();
  cmd_query->add_flag("--dedupe", dedupe);
  cmd_query->add_option("--max-depth", limits.max_depth);
  cmd_query->add_option("--max-proofs", limits.max_proofs);

  // select-coercion
  auto* cmd_select = app.add_subcommand("select-coercion", "pin a proof for a source/target pair");
  std::string sel_source, sel_target;
  std::size_t sel_index = 0;
  cmd_select->add_option("source", sel_source)->required();
  cmd_select->add_option("target", sel_target)->required();
  cmd_select->add_option("index", sel_index)->required();

  // analytic
  auto* cmd_analytic = app.add_subcommand("analytic", "register or run an analytic");
  std::string an_mode, an_name, an_command, an_type, an_input;
  cmd_analytic->add_option("mode", an_mode, "'register' or 'run'")->required();
  cmd_analytic->add_option("name", an_name)->required();
  cmd_analytic->add_option("arg1", an_command, "register: command; run: input term");
  cmd_analytic->add_option("arg2", an_type, "register: interface type");

  // taxonomy
  auto* cmd_taxonomy = app.add_subcommand("taxonomy", "load or show a taxonomy");
  std::string tax_mode, tax_file;
  cmd_taxonomy->add_option("mode", tax_mode, "'load' or 'show'")->required();
  cmd_taxonomy->add_option("file", tax_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  auto need_space = [&]() -> Dataspace {
    if (space_path.empty())
      throw DataspaceError("this subcommand needs --space <state-file>");
    return Dataspace::load(space_path);
  };

  try {
    if (*cmd_parse) {
      auto sf = common.load_schema_file();
      auto ctx = make_context(sf.schema, sf.env);
      if (parse_what == "type") {
        std::cout << format_type(parse_type(parse_text, ctx)) << "\n";
      } else if (parse_what == "term") {
        std::cout << format_term(parse_term(parse_text, ctx)) << "\n";
      } else {
        throw Error("parse mode must be 'type' or 'term'");
      }
      return kOk;
    }

    if (*cmd_eval) {
      auto sf = common.load_schema_file();
      auto ctx = make_context(sf.schema, sf.env);
      auto reg = SymbolRegistry::with_builtins();
      Bindings binds;
      for (const auto& spec : eval_binds) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
          throw Error("--bind expects NAME=TERM");
        binds[spec.substr(0, eq)] = parse_term(spec.substr(eq + 1), ctx);
      }
      TermPtr value = eval(parse_term(eval_text, ctx), binds, reg, &sf.schema);
      std::cout << format_term(value) << "\n";
      return kOk;
    }

    if (*cmd_check) {
      auto sf = common.load_schema_file();
      auto ctx = make_context(sf.schema, sf.env);
      auto reg = SymbolRegistry::with_builtins();
      auto result = check_membership(sf.env, parse_term(check_term, ctx),
                                     parse_type(check_type, ctx), reg, sf.schema);
      if (explain)
        for (const auto& line : result.trace)
          std::cout << line << "\n";
      std::cout << (result.ok ? "true" : "false") << "\n";
      return result.ok ? kOk : kRefuted;
    }

    if (*cmd_subtype) {
      auto sf = common.load_schema_file();
      auto tax = common.load_taxonomy();
      if (enumerate > 0) {
        auto ctx = make_context(sf.schema, sf.env);
        ProverLimits enum_limits = limits;
        enum_limits.max_proofs = enumerate;
        auto proofs = enumerate_proofs(sf.env, parse_type(sub_text, ctx),
                                       parse_type(sup_text, ctx), sf.schema, tax, enum_limits);
        std::cout << proofs.size() << " proof(s)\n";
        for (std::size_t i = 0; i < proofs.size(); ++i) {
          std::cout << "--- proof " << i << " ---\n";
          std::cout << format_proof(proofs[i]);
        }
        return proofs.empty() ? kRefuted : kOk;
      }
      auto result = prove_pair(sf, tax, sub_text, sup_text, limits);
      switch (result.outcome) {
        case ProveOutcome::Proved:
          std::cout << "proved\n";
          if (explain)
            std::cout << format_proof(*result.proof);
          return kOk;
        case ProveOutcome::Refuted:
          std::cout << "refuted\n";
          return kRefuted;
        case ProveOutcome::DepthExhausted:
          std::cout << "depth exhausted\n";
          return kLimitExhausted;
      }
    }

    if (*cmd_coerce) {
      auto sf = common.load_schema_file();
      auto tax = common.load_taxonomy();
      auto ctx = make_context(sf.schema, sf.env);
      ProverLimits enum_limits = limits;
      if (proof_index >= static_cast<std::size_t>(enum_limits.max_proofs))
        enum_limits.max_proofs = static_cast<int>(proof_index) + 1;
      auto proofs = enumerate_proofs(sf.env, parse_type(sub_text, ctx),
                                     parse_type(sup_text, ctx), sf.schema, tax, enum_limits);
      if (proofs.empty()) {
        std::cerr << "no proof of the subtype judgment\n";
        return kRefuted;
      }
      if (proof_index >= proofs.size())
        throw Error("proof index out of range; " + std::to_string(proofs.size()) +
                    " proofs enumerated");
      Coercion k = extract(proofs[proof_index], pad_width);
      if (coerce_mode == "extract") {
        std::cout << format_coercion(k);
        return kOk;
      }
      if (coerce_mode == "apply") {
        if (coerce_term.empty())
          throw Error("coerce apply needs a term argument");
        std::cout << format_term(ttiq::apply(k, parse_term(coerce_term, ctx))) << "\n";
        return kOk;
      }
      throw Error("coerce mode must be 'extract' or 'apply'");
    }

    if (*cmd_source) {
      auto space = need_space();
      if (src_mode == "register") {
        if (src_name.empty() || src_type.empty() || src_transport.empty())
          throw Error("source register needs <name> <Type> <transport>");
        auto report = space.register_source({src_name, src_type, src_transport}, limits);
        for (const auto& [sub, sup] : report.relations)
          std::cout << sub << " <= " << sup << "\n";
        return kOk;
      }
      if (src_mode == "list") {
        for (const auto& src : space.sources())
          std::cout << src.name << " " << src.schema_type << " " << src.transport << "\n";
        return kOk;
      }
      throw Error("source mode must be 'register' or 'list'");
    }

    if (*cmd_query) {
      auto space = need_space();
      Query query = parse_query(query_text, space.parse_context());
      QueryResult result = space.execute(query, limits, dedupe);
      print_query_result(result);
      return result.failures.empty() ? kOk : kExternalFailure;
    }

    if (*cmd_select) {
      auto space = need_space();
      space.select_coercion(sel_source, sel_target, sel_index, limits);
      std::cout << "selected proof " << sel_index << " for " << sel_source << " -> "
                << sel_target << "\n";
      return kOk;
    }

    if (*cmd_analytic) {
      auto space = need_space();
      if (an_mode == "register") {
        if (an_command.empty() || an_type.empty())
          throw Error("analytic register needs <name> <command> <interface-type>");
        AnalyticManifest manifest;
        manifest.name = an_name;
        manifest.command = an_command;
        manifest.interface_type = parse_type(an_type, space.schema());
        space.register_analytic(manifest);
        return kOk;
      }
      if (an_mode == "run") {
        if (an_command.empty())
          throw Error("analytic run needs <name> <input-term>");
        TermPtr input = parse_term(an_command, space.parse_context());
        std::cout << format_term(space.invoke_analytic(an_name, input)) << "\n";
        return kOk;
      }
      throw Error("analytic mode must be 'register' or 'run'");
    }

    if (*cmd_taxonomy) {
      if (tax_mode == "load") {
        if (tax_file.empty())
          throw Error("taxonomy load needs a file");
        auto tax = Taxonomy::load(tax_file);
        std::cout << tax.label_edges().size() << " label edge(s), "
                  << tax.ctor_edges().size() << " ctor edge(s)\n";
        return kOk;
      }
      if (tax_mode == "show") {
        Taxonomy tax;
        if (!tax_file.empty()) {
          tax = Taxonomy::load(tax_file);
        } else if (!space_path.empty()) {
          tax = Dataspace::load(space_path).taxonomy();
        } else {
          throw Error("taxonomy show needs a file or --space");
        }
        for (const auto& [lower, upper] : tax.label_edges())
          std::cout << "label " << lower << " <= " << upper << "\n";
        for (const auto& [lower, upper] : tax.ctor_edges())
          std::cout << "ctor " << lower << " <= " << upper << "\n";
        return kOk;
      }
      throw Error("taxonomy mode must be 'load' or 'show'");
    }
  } catch (const TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExternalFailure;
  } catch (const AnalyticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExternalFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
