#include "ttiq/dataspace.hpp"

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "httplib.h"
#include "lexer.hpp"
#include "parse_detail.hpp"
#include "ttiq/printer.hpp"

namespace fs = std::filesystem;

namespace ttiq {

// --- query parsing --------------------------------------------------------------

namespace {

void collect_free_vars(const TermPtr& t, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, VarTerm>) {
          out.push_back(x.name);
        } else if constexpr (std::is_same_v<T, RecordTerm>) {
          for (const auto& f : x.fields)
            collect_free_vars(f.value, out);
        } else if constexpr (std::is_same_v<T, CtorApp> || std::is_same_v<T, SymApp>) {
          for (const auto& a : x.args)
            collect_free_vars(a, out);
        } else if constexpr (std::is_same_v<T, Select>) {
          collect_free_vars(x.target, out);
        } else if constexpr (std::is_same_v<T, PairTerm>) {
          collect_free_vars(x.first, out);
          collect_free_vars(x.second, out);
        }
      },
      t->node());
}

}  // namespace

Query parse_query(std::string_view text, const ParseContext& ctx) {
  auto toks = tokenize(text);
  std::size_t pos = 0;
  auto cur = [&]() -> const Token& { return toks[pos]; };
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(msg + ", found " + token_desc(cur()), cur().line, cur().col);
  };
  auto keyword = [&](const char* kw) {
    if (cur().kind != Tok::Ident || cur().text != kw)
      fail(std::string("expected '") + kw + "'");
    ++pos;
  };

  keyword("SELECT");
  if (cur().kind != Tok::QVar)
    fail("expected query variable");
  std::string var = toks[pos++].text;
  keyword("FROM");
  if (cur().kind != Tok::QVar || cur().text != var)
    fail("expected the query variable '" + var + "'");
  ++pos;

  bool bounded = false;
  if (cur().kind == Tok::Ident && cur().text == "a") {
    bounded = false;
    ++pos;
  } else if (cur().kind == Tok::Leq) {
    bounded = true;
    ++pos;
  } else {
    fail("expected 'a' or '<='");
  }
  if (cur().kind != Tok::Ident)
    fail("expected a type name");
  std::string type_name = toks[pos++].text;

  TermPtr condition;
  if (cur().kind == Tok::Ident && cur().text == "WHERE") {
    ++pos;
    std::vector<Token> rest(toks.begin() + pos, toks.end());
    condition = detail::parse_term_tokens(std::move(rest), ctx);
    pos = toks.size() - 1;
  }
  if (cur().kind != Tok::End)
    fail("unexpected trailing input");

  if (condition) {
    std::vector<std::string> free;
    collect_free_vars(condition, free);
    for (const auto& name : free)
      if (name != var)
        throw DataspaceError("condition may only mention the query variable " + var +
                             ", found '" + name + "'");
  }

  if (bounded)
    return BoundedQuery{var, std::move(type_name), condition};
  return InstanceQuery{var, std::move(type_name), condition};
}

// --- transports -------------------------------------------------------------------

std::string fetch_transport(const std::string& transport, const std::string& base_dir) {
  if (transport.rfind("http://", 0) == 0) {
    std::string rest = transport.substr(7);
    auto slash = rest.find('/');
    std::string host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    if (host_port.empty())
      throw TransportError("malformed url '" + transport + "'");
    httplib::Client client("http://" + host_port);
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
    auto res = client.Get(path);
    if (!res)
      throw TransportError("GET " + transport + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw TransportError("GET " + transport + " returned status " +
                           std::to_string(res->status));
    return res->body;
  }
  if (transport.rfind("https://", 0) == 0)
    throw TransportError("https transports are not supported; use http or a file");

  std::string path = transport.rfind("file:", 0) == 0 ? transport.substr(5) : transport;
  fs::path full = fs::path(path).is_absolute() ? fs::path(path) : fs::path(base_dir) / path;
  std::ifstream in(full);
  if (!in)
    throw TransportError("cannot open '" + full.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- processes ---------------------------------------------------------------------

ProcessResult run_process(const std::string& command, const std::string& input) {
  signal(SIGPIPE, SIG_IGN);  // a child may exit without reading its stdin

  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw AnalyticError("cannot create pipes");

  pid_t pid = fork();
  if (pid < 0)
    throw AnalyticError("fork failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);

  std::size_t written = 0;
  while (written < input.size()) {
    ssize_t n = write(in_pipe[1], input.data() + written, input.size() - written);
    if (n <= 0)
      break;  // child closed its stdin; fine
    written += static_cast<std::size_t>(n);
  }
  close(in_pipe[1]);

  std::string output;
  char buf[4096];
  ssize_t n;
  while ((n = read(out_pipe[0], buf, sizeof buf)) > 0)
    output.append(buf, static_cast<std::size_t>(n));
  close(out_pipe[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  ProcessResult result;
  result.output = std::move(output);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// --- analytic interfaces --------------------------------------------------------------

AnalyticInterface analyze_interface(const TypePtr& type) {
  TypePtr cur = type;
  // bind leading type variables to their bounds
  while (const auto* bp = cur->as<BoundedProdType>())
    cur = subst_named(bp->body, bp->type_var, bp->bound);

  const auto* input = cur->as<DepProdType>();
  if (!input)
    throw AnalyticError("analytic interface must quantify over its input: forall x: T. ...");
  const auto* arrow = input->body->as<ArrowType>();
  if (!arrow || arrow->params.size() != 1)
    throw AnalyticError("analytic interface needs a single condition before '->'");
  const auto* pre = arrow->params[0]->as<PropType>();
  if (!pre)
    throw AnalyticError("analytic precondition must be a proposition");

  TypePtr out_part = arrow->result;
  while (const auto* bs = out_part->as<BoundedSumType>())
    out_part = subst_named(bs->body, bs->type_var, bs->bound);

  std::string output_var;
  TypePtr output_type;
  TypePtr post_type;
  if (const auto* all = out_part->as<DepProdType>()) {
    output_var = all->var;
    output_type = all->domain;
    post_type = all->body;
  } else if (const auto* some = out_part->as<DepSumType>()) {
    output_var = some->var;
    output_type = some->domain;
    post_type = some->body;
  } else {
    throw AnalyticError("analytic interface must quantify over its output");
  }
  const auto* post = post_type->as<PropType>();
  if (!post)
    throw AnalyticError("analytic postcondition must be a proposition");

  return AnalyticInterface{input->var, input->domain, pre->body,
                           output_var, output_type, post->body};
}

// --- dataspace state ----------------------------------------------------------------

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    out.push_back(line);
  return out;
}

}  // namespace

std::string Dataspace::resolve_path(const std::string& token) const {
  fs::path p(token);
  if (p.is_absolute())
    return token;
  return (fs::path(state_path_).parent_path() / p).string();
}

Dataspace Dataspace::load(const std::string& state_path) {
  std::ifstream in(state_path);
  if (!in)
    throw DataspaceError("cannot open dataspace state file '" + state_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();

  Dataspace space;
  space.state_path_ = state_path;

  int lineno = 0;
  for (const auto& raw : split_lines(buf.str())) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind))
      continue;
    auto fail = [&](const std::string& msg) -> void {
      throw DataspaceError(state_path + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (kind == "schema") {
      std::string token;
      if (!(ls >> token))
        fail("expected a schema path");
      if (!space.schema_token_.empty())
        fail("duplicate schema line");
      space.schema_token_ = token;
      auto loaded = load_schema(space.resolve_path(token));
      space.schema_ = std::move(loaded.schema);
      space.env_ = std::move(loaded.env);
    } else if (kind == "taxonomy") {
      std::string token;
      if (!(ls >> token))
        fail("expected a taxonomy path");
      if (!space.taxonomy_token_.empty())
        fail("duplicate taxonomy line");
      space.taxonomy_token_ = token;
      space.taxonomy_ = Taxonomy::load(space.resolve_path(token));
    } else if (kind == "source") {
      DataSource src;
      if (!(ls >> src.name >> src.schema_type >> src.transport))
        fail("expected 'source <name> <Type> <transport>'");
      space.sources_.push_back(std::move(src));
    } else if (kind == "select") {
      std::string source, target;
      std::size_t index;
      if (!(ls >> source >> target >> index))
        fail("expected 'select <source> <Target> <index>'");
      space.selections_[{source, target}] = index;
    } else if (kind == "analytic") {
      std::string name;
      if (!(ls >> name))
        fail("expected an analytic name");
      std::string rest;
      std::getline(ls, rest);
      auto open = rest.find('"');
      auto close = rest.find('"', open + 1);
      if (open == std::string::npos || close == std::string::npos)
        fail("expected a quoted command");
      AnalyticManifest m;
      m.name = name;
      m.command = rest.substr(open + 1, close - open - 1);
      std::string type_text = rest.substr(close + 1);
      try {
        m.interface_type = parse_type(type_text, space.schema_);
        analyze_interface(m.interface_type);
      } catch (const Error& e) {
        fail(e.what());
      }
      space.analytics_.push_back(std::move(m));
    } else {
      fail("unknown manifest entry '" + kind + "'");
    }
  }

  for (std::size_t i = 0; i < space.sources_.size(); ++i)
    for (std::size_t j = i + 1; j < space.sources_.size(); ++j)
      if (space.sources_[i].name == space.sources_[j].name)
        throw DataspaceError("duplicate source name '" + space.sources_[i].name + "'");
  return space;
}

void Dataspace::save_locked() const {
  std::ofstream out(state_path_, std::ios::trunc);
  if (!out)
    throw DataspaceError("cannot write state file '" + state_path_ + "'");
  if (!schema_token_.empty())
    out << "schema " << schema_token_ << "\n";
  if (!taxonomy_token_.empty())
    out << "taxonomy " << taxonomy_token_ << "\n";
  for (const auto& src : sources_)
    out << "source " << src.name << " " << src.schema_type << " " << src.transport << "\n";
  for (const auto& [key, index] : selections_)
    out << "select " << key.first << " " << key.second << " " << index << "\n";
  for (const auto& m : analytics_)
    out << "analytic " << m.name << " \"" << m.command << "\" " << format_type(m.interface_type)
        << "\n";
}

ParseContext Dataspace::parse_context() const {
  ParseContext ctx;
  // capture by value: the context may outlive a reference to this
  auto schema = schema_;
  auto env = env_;
  ctx.is_type_name = [schema](std::string_view name) { return schema.lookup(name) != nullptr; };
  ctx.is_symbol = [env](std::string_view name) { return env.is_symbol(name); };
  return ctx;
}

const std::vector<ProofTree>& Dataspace::proofs_locked(const std::string& sub,
                                                       const std::string& sup,
                                                       const ProverLimits& limits) {
  auto key = std::make_pair(sub, sup);
  auto it = proof_cache_.find(key);
  if (it != proof_cache_.end())
    return it->second;
  auto proofs =
      enumerate_proofs(env_, types::named(sub), types::named(sup), schema_, taxonomy_, limits);
  return proof_cache_.emplace(std::move(key), std::move(proofs)).first->second;
}

const std::vector<ProofTree>& Dataspace::proofs_between(const std::string& sub,
                                                        const std::string& sup,
                                                        const ProverLimits& limits) {
  std::lock_guard<std::mutex> lock(*mutex_);
  return proofs_locked(sub, sup, limits);
}

RegistrationReport Dataspace::register_source(const DataSource& source,
                                              const ProverLimits& limits) {
  std::lock_guard<std::mutex> lock(*mutex_);
  for (const auto& existing : sources_)
    if (existing.name == source.name)
      throw DataspaceError("source '" + source.name + "' is already registered");
  if (!schema_.lookup(source.schema_type))
    throw DataspaceError("source schema type '" + source.schema_type +
                         "' is not defined in the schema");
  if (source.transport.rfind("http://", 0) == 0) {
    std::string rest = source.transport.substr(7);
    if (rest.empty() || rest.front() == '/')
      throw TransportError("malformed url '" + source.transport + "'");
  } else {
    // file transports must be reachable at registration
    fetch_transport(source.transport, fs::path(state_path_).parent_path().string());
  }

  RegistrationReport report;
  report.source = source.name;
  for (const auto& other : schema_.names()) {
    if (other == source.schema_type)
      continue;
    if (!proofs_locked(source.schema_type, other, limits).empty())
      report.relations.emplace_back(source.schema_type, other);
    if (!proofs_locked(other, source.schema_type, limits).empty())
      report.relations.emplace_back(other, source.schema_type);
  }

  sources_.push_back(source);
  save_locked();
  return report;
}

QueryPlan Dataspace::plan_locked(const std::string& target, const ProverLimits& limits) {
  if (!schema_.lookup(target))
    throw DataspaceError("unknown query target type '" + target + "'");

  std::vector<DataSource> ordered = sources_;
  std::sort(ordered.begin(), ordered.end(),
            [](const DataSource& a, const DataSource& b) { return a.name < b.name; });

  QueryPlan plan;
  plan.target = target;
  for (const auto& src : ordered) {
    const auto& proofs = proofs_locked(src.schema_type, target, limits);
    if (proofs.empty())
      continue;
    std::size_t index = 0;
    auto sel = selections_.find({src.name, target});
    if (sel != selections_.end() && sel->second < proofs.size())
      index = sel->second;
    PlanEntry entry{src, proofs[index], index, extract(proofs[index])};
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

QueryPlan Dataspace::plan(const Query& query, const ProverLimits& limits) {
  std::lock_guard<std::mutex> lock(*mutex_);
  const std::string& target = std::holds_alternative<InstanceQuery>(query)
                                  ? std::get<InstanceQuery>(query).target
                                  : std::get<BoundedQuery>(query).bound;
  return plan_locked(target, limits);
}

QueryResult Dataspace::execute(const Query& query, const ProverLimits& limits, bool dedupe) {
  if (const auto* bounded = std::get_if<BoundedQuery>(&query)) {
    std::lock_guard<std::mutex> lock(*mutex_);
    if (!schema_.lookup(bounded->bound))
      throw DataspaceError("unknown query bound type '" + bounded->bound + "'");
    QueryResult result;
    for (const auto& name : schema_.names()) {
      const auto& proofs = proofs_locked(name, bounded->bound, limits);
      if (proofs.empty())
        continue;
      TermPtr witness = terms::str(name);
      if (bounded->condition) {
        Bindings binds{{bounded->type_var, witness}};
        TermPtr verdict = eval(bounded->condition, binds, registry_, &schema_);
        const auto* b = verdict->as<BoolLit>();
        if (!b)
          throw EvalError("query condition did not evaluate to a boolean");
        if (!b->value)
          continue;
      }
      result.rows.push_back(
          {witness, Provenance{name, 0, std::string(rule_name(proofs[0].rule))}});
    }
    return result;
  }

  const auto& q = std::get<InstanceQuery>(query);
  QueryPlan query_plan;
  std::string base_dir;
  SymbolRegistry registry;
  Schema schema;
  Environment env;
  ParseContext ctx;
  {
    std::lock_guard<std::mutex> lock(*mutex_);
    query_plan = plan_locked(q.target, limits);
    base_dir = fs::path(state_path_).parent_path().string();
    registry = registry_;
    schema = schema_;
    env = env_;
  }
  ctx.is_type_name = [&schema](std::string_view name) { return schema.lookup(name) != nullptr; };
  ctx.is_symbol = [&env](std::string_view name) { return env.is_symbol(name); };

  // fetch concurrently, merge in plan (source-name) order
  std::vector<std::future<std::string>> fetches;
  fetches.reserve(query_plan.entries.size());
  for (const auto& entry : query_plan.entries) {
    fetches.push_back(std::async(std::launch::async, [transport = entry.source.transport,
                                                      base_dir]() {
      return fetch_transport(transport, base_dir);
    }));
  }

  QueryResult result;
  TypePtr target_type = types::named(q.target);
  for (std::size_t i = 0; i < query_plan.entries.size(); ++i) {
    const auto& entry = query_plan.entries[i];
    std::string payload;
    try {
      payload = fetches[i].get();
    } catch (const TransportError& e) {
      result.failures.push_back({entry.source.name, e.what()});
      continue;
    }
    TypePtr source_type = types::named(entry.source.schema_type);
    int lineno = 0;
    for (const auto& raw : split_lines(payload)) {
      ++lineno;
      std::string line = raw;
      auto hash = line.find('#');
      if (hash != std::string::npos)
        line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      auto where = [&]() {
        return entry.source.name + ":" + std::to_string(lineno);
      };
      TermPtr term;
      try {
        term = detail::parse_term_tokens(tokenize(line), ctx);
      } catch (const ParseError& e) {
        result.warnings.push_back(where() + ": " + e.what());
        continue;
      }
      if (!check_membership(env, term, source_type, registry, schema)) {
        result.warnings.push_back(where() + ": term does not inhabit " +
                                  entry.source.schema_type + ", skipped");
        continue;
      }
      TermPtr converted = ttiq::apply(entry.coercion, term);
      if (!check_membership(env, converted, target_type, registry, schema)) {
        result.warnings.push_back(where() + ": coerced term does not inhabit " + q.target +
                                  ", skipped");
        continue;
      }
      if (q.condition) {
        Bindings binds{{q.var, converted}};
        TermPtr verdict = eval(q.condition, binds, registry, &schema);
        const auto* b = verdict->as<BoolLit>();
        if (!b)
          throw EvalError("query condition did not evaluate to a boolean");
        if (!b->value)
          continue;
      }
      result.rows.push_back({converted, Provenance{entry.source.name, entry.proof_index,
                                                   summarize_coercion(entry.coercion)}});
    }
  }

  if (dedupe) {
    std::vector<ResultRow> unique;
    for (auto& row : result.rows) {
      bool seen = std::any_of(unique.begin(), unique.end(),
                              [&](const ResultRow& u) { return equal(u.term, row.term); });
      if (!seen)
        unique.push_back(std::move(row));
    }
    result.rows = std::move(unique);
  }
  return result;
}

void Dataspace::select_coercion(const std::string& source, const std::string& target,
                                std::size_t index, const ProverLimits& limits) {
  std::lock_guard<std::mutex> lock(*mutex_);
  auto src = std::find_if(sources_.begin(), sources_.end(),
                          [&](const DataSource& s) { return s.name == source; });
  if (src == sources_.end())
    throw DataspaceError("unknown source '" + source + "'");
  if (!schema_.lookup(target))
    throw DataspaceError("unknown target type '" + target + "'");
  const auto& proofs = proofs_locked(src->schema_type, target, limits);
  if (proofs.empty())
    throw DataspaceError("no proofs relate " + src->schema_type + " to " + target);
  if (index >= proofs.size())
    throw DataspaceError("proof index " + std::to_string(index) + " out of range; " +
                         std::to_string(proofs.size()) + " proofs enumerated");
  selections_[{source, target}] = index;
  save_locked();
}

void Dataspace::register_analytic(const AnalyticManifest& manifest) {
  std::lock_guard<std::mutex> lock(*mutex_);
  for (const auto& existing : analytics_)
    if (existing.name == manifest.name)
      throw DataspaceError("analytic '" + manifest.name + "' is already registered");
  analyze_interface(manifest.interface_type);  // validates the shape
  analytics_.push_back(manifest);
  save_locked();
}

TermPtr Dataspace::invoke_analytic(const std::string& name, const TermPtr& input) {
  AnalyticManifest manifest;
  SymbolRegistry registry;
  Schema schema;
  Environment env;
  {
    std::lock_guard<std::mutex> lock(*mutex_);
    auto it = std::find_if(analytics_.begin(), analytics_.end(),
                           [&](const AnalyticManifest& m) { return m.name == name; });
    if (it == analytics_.end())
      throw DataspaceError("unknown analytic '" + name + "'");
    manifest = *it;
    registry = registry_;
    schema = schema_;
    env = env_;
  }
  AnalyticInterface iface = analyze_interface(manifest.interface_type);

  if (!check_membership(env, input, iface.input_type, registry, schema))
    throw AnalyticError("input does not inhabit " + format_type(iface.input_type));
  {
    Bindings binds{{iface.input_var, input}};
    TermPtr verdict = eval(iface.precondition, binds, registry, &schema);
    const auto* b = verdict->as<BoolLit>();
    if (!b || !b->value)
      throw AnalyticError("precondition rejected the input; analytic not launched");
  }

  ProcessResult proc = run_process(manifest.command, format_term(input) + "\n");
  if (proc.exit_code != 0)
    throw AnalyticError("analytic '" + name + "' exited with status " +
                        std::to_string(proc.exit_code));

  ParseContext ctx;
  ctx.is_type_name = [&schema](std::string_view n) { return schema.lookup(n) != nullptr; };
  ctx.is_symbol = [&env](std::string_view n) { return env.is_symbol(n); };
  TermPtr output;
  try {
    output = detail::parse_term_tokens(tokenize(proc.output), ctx);
  } catch (const ParseError& e) {
    throw AnalyticError("analytic output is not a term: " + std::string(e.what()));
  }

  if (!check_membership(env, output, iface.output_type, registry, schema))
    throw AnalyticError("analytic output does not inhabit " + format_type(iface.output_type));
  {
    Bindings binds{{iface.input_var, input}, {iface.output_var, output}};
    TermPtr verdict = eval(iface.postcondition, binds, registry, &schema);
    const auto* b = verdict->as<BoolLit>();
    if (!b || !b->value)
      throw AnalyticError("analytic output rejected: postcondition is false");
  }
  return output;
}

}  // namespace ttiq
