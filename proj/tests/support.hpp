#ifndef TTIQ_TESTS_SUPPORT_HPP
#define TTIQ_TESTS_SUPPORT_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "ttiq/ast.hpp"
#include "ttiq/parser.hpp"
#include "ttiq/schema.hpp"
#include "ttiq/taxonomy.hpp"

namespace ttiq::testing {

// The persons-of-interest fixture: A is the application's schema, B adds a
// field, C renames date_of_birth, Mother/Woman model the class-axiom example.
inline const char* kPoiSchema = R"(
type A = name: string * date_of_birth: date ;
type B = name: string * date_of_birth: date * ethnicity: string ;
type C = name: string * birth_date: date * ethnicity: string ;
type Cmixed = ethnicity: string * birth_date: date * name: string ;
type Woman = gender: {'Male', 'Female', 'Unknown'} ;
type Person = gender: {'Male', 'Female', 'Unknown'} ;
ctor hasChild of Woman * Person -> hasChild ;
type Mother = exists w: Woman. exists r: hasChild. exists p: Person. r == hasChild(w, p) ;
)";

inline const char* kPoiTaxonomy = "label birth_date <= date_of_birth\n";

inline SchemaFile poi_schema() { return parse_schema(kPoiSchema); }

inline Taxonomy poi_taxonomy() { return Taxonomy::parse(kPoiTaxonomy); }

// Scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate = base / ("ttiq-" + tag + "-" + std::to_string(::getpid()) + "-" +
                               std::to_string(counter_++));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::string write(const std::string& name, const std::string& content) const {
    auto file = path_ / name;
    std::ofstream out(file);
    out << content;
    return file.string();
  }

private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

// --- random AST generators (fixed seeds; property tests stay reproducible) ---

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::string pick_of(Rng& rng, const std::vector<std::string>& pool) {
  return pool[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(pool.size()) - 1))];
}

inline const std::vector<std::string> kLabels = {"name", "age",  "size", "kind",
                                                 "note", "tag",  "when", "who"};
inline const std::vector<std::string> kVars = {"x", "y", "z", "w", "item", "?x", "?q"};
inline const std::vector<std::string> kCtors = {"c", "hasChild", "mk", "rel"};
inline const std::vector<std::string> kSymbols = {"f", "g", "p"};
inline const std::vector<std::string> kEnumPool = {"Male", "Female", "Unknown", "Hot",
                                                   "Cold", "Warm",   "On",      "Off"};

inline std::string gen_string(Rng& rng) {
  static const std::string charset = "abcxyz019_ .,:'\"\\!-";
  int len = pick(rng, 0, 10);
  std::string out;
  for (int i = 0; i < len; ++i)
    out += charset[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(charset.size()) - 1))];
  if (pick(rng, 0, 9) == 0)
    out += '\n';
  return out;
}

inline BigInt gen_bigint(Rng& rng) {
  int digits = pick(rng, 1, 24);
  std::string text = pick(rng, 0, 3) == 0 ? "-" : "";
  text += static_cast<char>('1' + pick(rng, 0, 8));
  for (int i = 1; i < digits; ++i)
    text += static_cast<char>('0' + pick(rng, 0, 9));
  if (pick(rng, 0, 9) == 0)
    return BigInt::from_string("0");
  return BigInt::from_string(text);
}

// Non-negative and narrow enough for the default padding width; members of
// num that coercions may need to pad.
inline BigInt gen_natural(Rng& rng) {
  int digits = pick(rng, 1, 12);
  std::string text(1, static_cast<char>('1' + pick(rng, 0, 8)));
  for (int i = 1; i < digits; ++i)
    text += static_cast<char>('0' + pick(rng, 0, 9));
  if (pick(rng, 0, 9) == 0)
    return BigInt::from_string("0");
  return BigInt::from_string(text);
}

inline Date gen_date(Rng& rng) {
  while (true) {
    int y = pick(rng, 0, 9999), m = pick(rng, 1, 12), d = pick(rng, 1, 31);
    if (Date::valid(y, m, d))
      return Date{y, m, d};
  }
}

inline std::string gen_uri(Rng& rng) {
  static const std::vector<std::string> schemes = {"http", "urn", "file", "tag"};
  std::string body;
  int len = pick(rng, 1, 12);
  static const std::string charset = "abcxyz019/._-";
  for (int i = 0; i < len; ++i)
    body += charset[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(charset.size()) - 1))];
  return pick_of(rng, schemes) + ":" + body;
}

TermPtr gen_term(Rng& rng, int depth);

inline std::vector<std::string> distinct_labels(Rng& rng, int count) {
  std::vector<std::string> pool = kLabels;
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

inline TermPtr gen_term(Rng& rng, int depth) {
  int choice = depth <= 0 ? pick(rng, 0, 6) : pick(rng, 0, 11);
  switch (choice) {
    case 0: return terms::str(gen_string(rng));
    case 1: return terms::num(gen_bigint(rng));
    case 2: return terms::boolean(pick(rng, 0, 1) == 1);
    case 3: return terms::date(gen_date(rng));
    case 4: return terms::uri(gen_uri(rng));
    case 5:
    case 6: return terms::var(pick_of(rng, kVars));
    case 7: {
      auto labels = distinct_labels(rng, pick(rng, 1, 3));
      std::vector<TermField> fields;
      for (const auto& label : labels)
        fields.push_back({label, gen_term(rng, depth - 1)});
      return terms::record(std::move(fields));
    }
    case 8: {
      std::vector<TermPtr> args;
      int n = pick(rng, 0, 3);
      for (int i = 0; i < n; ++i)
        args.push_back(gen_term(rng, depth - 1));
      return terms::ctor_app(pick_of(rng, kCtors), std::move(args));
    }
    case 9: {
      if (pick(rng, 0, 1) == 0)
        return terms::sym_app("==", {gen_term(rng, depth - 1), gen_term(rng, depth - 1)});
      std::vector<TermPtr> args;
      int n = pick(rng, 1, 2);
      for (int i = 0; i < n; ++i)
        args.push_back(gen_term(rng, depth - 1));
      return terms::sym_app(pick_of(rng, kSymbols), std::move(args));
    }
    case 10: return terms::select(gen_term(rng, depth - 1), pick_of(rng, kLabels));
    default: return terms::pair(gen_term(rng, depth - 1), gen_term(rng, depth - 1));
  }
}

// Generates types over the given schema names; bound type variables may be
// referenced inside bounded-quantifier bodies.
class TypeGen {
public:
  TypeGen(std::vector<std::string> schema_names) : schema_names_(std::move(schema_names)) {}

  TypePtr gen(Rng& rng, int depth) {
    int choice = depth <= 0 ? pick(rng, 0, 2) : pick(rng, 0, 11);
    switch (choice) {
      case 0:
        return types::prim(static_cast<Prim>(pick(rng, 0, 4)));
      case 1: {
        std::vector<std::string> pool = kEnumPool;
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(static_cast<std::size_t>(pick(rng, 1, 4)));
        return types::enumerated(std::move(pool));
      }
      case 2: {
        if (!bound_.empty() && pick(rng, 0, 1) == 0)
          return types::named(pick_of(rng, bound_));
        if (!schema_names_.empty())
          return types::named(pick_of(rng, schema_names_));
        return types::prim(Prim::Num);
      }
      case 3: {
        auto labels = distinct_labels(rng, pick(rng, 1, 3));
        std::vector<RecordField> fields;
        for (const auto& label : labels)
          fields.push_back({label, gen(rng, depth - 1)});
        return types::record(std::move(fields));
      }
      case 4: {
        std::vector<TypePtr> args;
        int n = pick(rng, 1, 3);
        for (int i = 0; i < n; ++i)
          args.push_back(gen(rng, depth - 1));
        std::string ctor = pick_of(rng, kCtors);
        return types::concrete(ctor, std::move(args),
                               pick(rng, 0, 1) ? ctor : pick_of(rng, kCtors));
      }
      case 5:
        return types::dep_sum(pick_of(rng, {"x", "y", "z"}), gen(rng, depth - 1),
                              gen(rng, depth - 1));
      case 6:
        return types::dep_prod(pick_of(rng, {"x", "y", "z"}), gen(rng, depth - 1),
                               gen(rng, depth - 1));
      case 7:
      case 8: {
        std::string tv = pick(rng, 0, 1) ? "X" : "Y";
        TypePtr bound = gen(rng, depth - 1);
        bound_.push_back(tv);
        TypePtr body = gen(rng, depth - 1);
        bound_.pop_back();
        return choice == 7 ? types::bounded_sum(tv, bound, body)
                           : types::bounded_prod(tv, bound, body);
      }
      case 9: {
        std::vector<TypePtr> params;
        int n = pick(rng, 1, 3);
        for (int i = 0; i < n; ++i)
          params.push_back(gen(rng, depth - 1));
        return types::arrow(std::move(params), gen(rng, depth - 1));
      }
      default:
        return types::prop(gen_term(rng, depth - 1));
    }
  }

private:
  std::string pick_of(Rng& rng, std::vector<std::string> pool) {
    return pool[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(pool.size()) - 1))];
  }

  std::vector<std::string> schema_names_;
  std::vector<std::string> bound_;
};

// Types whose ground membership is fully structural: primitives, enumerations,
// records, concrete datatypes, dependent sums over them, and the trivially
// true proposition.
inline TypePtr gen_ground_type(Rng& rng, int depth) {
  int choice = depth <= 0 ? pick(rng, 0, 1) : pick(rng, 0, 5);
  switch (choice) {
    case 0:
      return types::prim(static_cast<Prim>(pick(rng, 0, 4)));
    case 1: {
      std::vector<std::string> pool = kEnumPool;
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(static_cast<std::size_t>(pick(rng, 1, 4)));
      return types::enumerated(std::move(pool));
    }
    case 2: {
      auto labels = distinct_labels(rng, pick(rng, 1, 3));
      std::vector<RecordField> fields;
      for (const auto& label : labels)
        fields.push_back({label, gen_ground_type(rng, depth - 1)});
      return types::record(std::move(fields));
    }
    case 3: {
      std::vector<TypePtr> args;
      int n = pick(rng, 1, 3);
      for (int i = 0; i < n; ++i)
        args.push_back(gen_ground_type(rng, depth - 1));
      return types::concrete(pick_of(rng, kCtors), std::move(args));
    }
    case 4:
      return types::dep_sum(pick_of(rng, {"x", "y", "z"}), gen_ground_type(rng, depth - 1),
                            pick(rng, 0, 1) ? types::prop(terms::boolean(true))
                                            : gen_ground_type(rng, depth - 1));
    default:
      return types::prop(terms::boolean(true));
  }
}

// A term inhabiting the (resolved) type; dependent sums must use propositions
// that evaluate to true for the generated witnesses.
inline TermPtr gen_member(Rng& rng, const TypePtr& type, const Schema& schema) {
  TypePtr t = resolve(type, schema);
  if (const auto* prim = t->as<PrimitiveType>()) {
    switch (prim->kind) {
      case Prim::String: return terms::str(gen_string(rng));
      case Prim::Num: return terms::num(gen_natural(rng));
      case Prim::Bool: return terms::boolean(pick(rng, 0, 1) == 1);
      case Prim::Uri: return terms::uri(gen_uri(rng));
      case Prim::Date: return terms::date(gen_date(rng));
    }
  }
  if (const auto* en = t->as<EnumeratedType>())
    return terms::str(en->values[static_cast<std::size_t>(
        pick(rng, 0, static_cast<int>(en->values.size()) - 1))]);
  if (const auto* rec = t->as<RecordType>()) {
    std::vector<TermField> fields;
    for (const auto& f : rec->fields)
      fields.push_back({f.label, gen_member(rng, f.type, schema)});
    return terms::record(std::move(fields));
  }
  if (const auto* con = t->as<ConcreteType>()) {
    std::vector<TermPtr> args;
    for (const auto& a : con->args)
      args.push_back(gen_member(rng, a, schema));
    return terms::ctor_app(con->ctor, std::move(args));
  }
  if (const auto* dep = t->as<DepSumType>())
    return terms::pair(gen_member(rng, dep->domain, schema),
                       gen_member(rng, dep->body, schema));
  if (t->is<PropType>())
    return terms::boolean(true);
  throw std::runtime_error("gen_member: unsupported type form " + std::to_string(t->node().index()));
}

// Two members of the type with the first at or below the second in the
// natural order; ordering at the leaves is decided directly, without the
// library's natural_leq.
inline std::pair<TermPtr, TermPtr> gen_ordered_pair(Rng& rng, const TypePtr& type,
                                                    const Schema& schema) {
  TypePtr t = resolve(type, schema);
  if (const auto* prim = t->as<PrimitiveType>()) {
    switch (prim->kind) {
      case Prim::String: {
        auto a = gen_string(rng), b = gen_string(rng);
        if (b < a)
          std::swap(a, b);
        return {terms::str(a), terms::str(b)};
      }
      case Prim::Num: {
        auto a = gen_natural(rng), b = gen_natural(rng);
        if (b < a)
          std::swap(a, b);
        return {terms::num(a), terms::num(b)};
      }
      case Prim::Bool: {
        int a = pick(rng, 0, 1), b = pick(rng, 0, 1);
        if (b < a)
          std::swap(a, b);
        return {terms::boolean(a == 1), terms::boolean(b == 1)};
      }
      case Prim::Uri: {
        auto a = gen_uri(rng), b = gen_uri(rng);
        if (b < a)
          std::swap(a, b);
        return {terms::uri(a), terms::uri(b)};
      }
      case Prim::Date: {
        auto a = gen_date(rng), b = gen_date(rng);
        if (b < a)
          std::swap(a, b);
        return {terms::date(a), terms::date(b)};
      }
    }
  }
  if (const auto* en = t->as<EnumeratedType>()) {
    int a = pick(rng, 0, static_cast<int>(en->values.size()) - 1);
    int b = pick(rng, 0, static_cast<int>(en->values.size()) - 1);
    if (b < a)
      std::swap(a, b);
    return {terms::str(en->values[static_cast<std::size_t>(a)]),
            terms::str(en->values[static_cast<std::size_t>(b)])};
  }
  if (const auto* rec = t->as<RecordType>()) {
    std::vector<TermField> lo, hi;
    for (const auto& f : rec->fields) {
      auto [a, b] = gen_ordered_pair(rng, f.type, schema);
      lo.push_back({f.label, a});
      hi.push_back({f.label, b});
    }
    return {terms::record(std::move(lo)), terms::record(std::move(hi))};
  }
  if (const auto* con = t->as<ConcreteType>()) {
    std::vector<TermPtr> lo, hi;
    for (const auto& a : con->args) {
      auto [x, y] = gen_ordered_pair(rng, a, schema);
      lo.push_back(x);
      hi.push_back(y);
    }
    return {terms::ctor_app(con->ctor, std::move(lo)), terms::ctor_app(con->ctor, std::move(hi))};
  }
  if (const auto* dep = t->as<DepSumType>()) {
    auto [a, b] = gen_ordered_pair(rng, dep->domain, schema);
    return {terms::pair(a, gen_member(rng, dep->body, schema)),
            terms::pair(b, gen_member(rng, dep->body, schema))};
  }
  if (t->is<PropType>())
    return {terms::boolean(true), terms::boolean(true)};
  throw std::runtime_error("gen_ordered_pair: unsupported type form");
}

// A random record subtype scenario: sup has primitive fields; sub covers each
// sup field under the generated taxonomy (same label, or a lowered label
// related through it) at an equal-or-lower primitive type, plus extra fields.
struct RecordScenario {
  TypePtr sub;
  TypePtr sup;
  Taxonomy tax;
};

inline RecordScenario gen_record_scenario(Rng& rng) {
  static const std::vector<std::pair<Prim, Prim>> prim_pairs = {
      {Prim::Num, Prim::String}, {Prim::Bool, Prim::String}, {Prim::Date, Prim::String},
      {Prim::Uri, Prim::String}, {Prim::Bool, Prim::Num},    {Prim::String, Prim::String},
      {Prim::Num, Prim::Num},    {Prim::Date, Prim::Date}};
  auto pair_at = [&](int i) { return prim_pairs[static_cast<std::size_t>(i)]; };

  RecordScenario out;
  auto labels = distinct_labels(rng, pick(rng, 1, 3));
  std::vector<RecordField> sup_fields, sub_fields;
  for (const auto& label : labels) {
    auto [lo, hi] = pair_at(pick(rng, 0, static_cast<int>(prim_pairs.size()) - 1));
    TypePtr sub_type = types::prim(lo);
    TypePtr sup_type = types::prim(hi);
    if (pick(rng, 0, 3) == 0) {
      // one level of record nesting: the inner subtype drops a field too
      std::string inner = label + "_in";
      sub_type = types::record({{inner, sub_type}, {"pad", types::num()}});
      sup_type = types::record({{inner, sup_type}});
    }
    sup_fields.push_back({label, sup_type});
    if (pick(rng, 0, 1) == 0) {
      std::string lowered = label + "_lo";
      out.tax = out.tax.add_label_edge(lowered, label);
      sub_fields.push_back({lowered, sub_type});
    } else {
      sub_fields.push_back({label, sub_type});
    }
  }
  int extras = pick(rng, 0, 2);
  for (int i = 0; i < extras; ++i)
    sub_fields.push_back({"extra" + std::to_string(i), types::num()});
  std::shuffle(sub_fields.begin(), sub_fields.end(), rng);
  out.sub = types::record(std::move(sub_fields));
  out.sup = types::record(std::move(sup_fields));
  return out;
}

}  // namespace ttiq::testing

#endif
