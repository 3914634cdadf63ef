#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "ttiq/coercion.hpp"
#include "ttiq/interp.hpp"
#include "ttiq/printer.hpp"
#include "ttiq/prover.hpp"

using namespace ttiq;
using namespace ttiq::testing;

namespace {

struct Fixture {
  SchemaFile sf = poi_schema();
  Taxonomy tax = poi_taxonomy();
  SymbolRegistry reg = SymbolRegistry::with_builtins();

  Coercion between(const std::string& sub, const std::string& sup, int pad = kDefaultPadWidth) {
    auto ctx = make_context(sf.schema, sf.env);
    auto r = prove(sf.env, parse_type(sub, ctx), parse_type(sup, ctx), sf.schema, tax, {});
    REQUIRE(r);
    REQUIRE(check_rule(*r.proof, tax));
    return extract(*r.proof, pad);
  }

  TermPtr term(const std::string& text) { return parse_term(text, sf.env); }

  std::string apply_text(const Coercion& k, const std::string& text) {
    return format_term(ttiq::apply(k, term(text)));
  }
};

int proof_nodes(const ProofTree& p) {
  int n = 1;
  for (const auto& q : p.premises)
    n += proof_nodes(q);
  return n;
}

int coercion_nodes(const Coercion& k) {
  int n = 1;
  for (const auto& c : k.children)
    n += coercion_nodes(c);
  return n;
}

bool same_shape(const ProofTree& p, const Coercion& k) {
  if (p.premises.size() != k.children.size())
    return false;
  for (std::size_t i = 0; i < p.premises.size(); ++i)
    if (!same_shape(p.premises[i], k.children[i]))
      return false;
  return true;
}

}  // namespace

TEST_CASE("kappa0 drops the extra field exactly as stated") {
  Fixture fx;
  auto k0 = fx.between("B", "A");
  CHECK(k0.kind == Coercion::Kind::Record);
  CHECK(fx.apply_text(k0, "(name = \"N\", date_of_birth = 1980-05-05, ethnicity = \"E\")") ==
        "(name = \"N\", date_of_birth = 1980-05-05)");
}

TEST_CASE("kappa1 relabels birth_date to date_of_birth") {
  Fixture fx;
  auto k1 = fx.between("C", "A");
  CHECK(fx.apply_text(k1, "(name = \"N\", birth_date = 1980-05-05, ethnicity = \"E\")") ==
        "(name = \"N\", date_of_birth = 1980-05-05)");
  // relabel recorded explicitly
  REQUIRE(k1.relabels.size() == 2);
  CHECK(k1.relabels[1].first == "birth_date");
  CHECK(k1.relabels[1].second == "date_of_birth");
}

TEST_CASE("identity coercion maps every term to itself") {
  Fixture fx;
  auto id = fx.between("A", "A");
  CHECK(id.kind == Coercion::Kind::Identity);
  for (const char* text : {"(name = \"N\", date_of_birth = 1980-05-05)", "12", "true"}) {
    auto t = fx.term(text);
    CHECK(equal(ttiq::apply(id, t), t));
  }
}

TEST_CASE("the Mother coercion projects the witness") {
  Fixture fx;
  auto k = fx.between("Mother", "Woman");
  CHECK(k.kind == Coercion::Kind::SumProject);
  std::string w = "(gender = \"Female\")";
  std::string p = "(gender = \"Male\")";
  std::string r = "hasChild(" + w + ", " + p + ")";
  CHECK(fx.apply_text(k, "(" + w + ", (" + r + ", (" + p + ", true)))") == w);
}

TEST_CASE("primitive coercions render monotone strings") {
  Fixture fx;
  auto pad5 = fx.between("num", "string", 5);
  CHECK(pad5.kind == Coercion::Kind::NumToStringPadded);
  CHECK(fx.apply_text(pad5, "12") == "\"00012\"");
  CHECK(fx.apply_text(pad5, "0") == "\"00000\"");
  CHECK_THROWS_AS(ttiq::apply(pad5, fx.term("123456")), CoercionError);  // overflow
  CHECK_THROWS_AS(ttiq::apply(pad5, fx.term("-3")), CoercionError);     // negative

  CHECK(fx.apply_text(fx.between("date", "string"), "1980-05-05") == "\"1980-05-05\"");
  CHECK(fx.apply_text(fx.between("bool", "string"), "true") == "\"true\"");
  CHECK(fx.apply_text(fx.between("bool", "string"), "false") == "\"false\"");
  CHECK(fx.apply_text(fx.between("uri", "string"), "<urn:x:1>") == "\"urn:x:1\"");

  auto b2n = fx.between("bool", "num");
  CHECK(fx.apply_text(b2n, "true") == "1");
  CHECK(fx.apply_text(b2n, "false") == "0");
}

TEST_CASE("record coercions nest through record-typed fields") {
  Fixture fx;
  auto ctx = make_context(fx.sf.schema, fx.sf.env);
  auto sub = parse_type("person: (name: string * age: num) * note: string", ctx);
  auto sup = parse_type("person: (name: string * age: string)", ctx);
  auto r = prove(fx.sf.env, sub, sup, fx.sf.schema, fx.tax, {});
  REQUIRE(r);
  REQUIRE(r.proof->premises.size() == 1);
  CHECK(r.proof->premises[0].rule == Rule::SynRec);  // the inner record
  auto k = extract(*r.proof, 4);
  CHECK(fx.apply_text(k, "(person = (name = \"Ann\", age = 30), note = \"x\")") ==
        "(person = (name = \"Ann\", age = \"0030\"))");
}

TEST_CASE("shape mismatches are reported") {
  Fixture fx;
  auto k0 = fx.between("B", "A");
  CHECK_THROWS_AS(ttiq::apply(k0, fx.term("12")), CoercionError);
  CHECK_THROWS_AS(ttiq::apply(k0, fx.term("(name = \"N\")")), CoercionError);
  auto mother = fx.between("Mother", "Woman");
  CHECK_THROWS_AS(ttiq::apply(mother, fx.term("(gender = 'Female')")), CoercionError);
}

TEST_CASE("composition behaves as sequential application") {
  Fixture fx;
  auto b2n = fx.between("bool", "num");
  auto pad3 = fx.between("num", "string", 3);
  auto chained = compose(b2n, pad3);
  CHECK(fx.apply_text(chained, "true") == "\"001\"");
  CHECK(fx.apply_text(chained, "false") == "\"000\"");

  auto id = fx.between("A", "A");
  auto k0 = fx.between("B", "A");
  CHECK(format_coercion(compose(k0, id)) == format_coercion(k0));
  // composing with identity on the left behaves as the right coercion
  auto idB = fx.between("B", "B");
  auto row = fx.term("(name = \"N\", date_of_birth = 1980-05-05, ethnicity = \"E\")");
  CHECK(equal(ttiq::apply(compose(idB, k0), row), ttiq::apply(k0, row)));

  CHECK_THROWS_AS(compose(pad3, b2n), CoercionError);  // string does not meet bool
}

TEST_CASE("composition is associative along the C - B - A chain") {
  Fixture fx;
  auto kCB = fx.between("C", "B");
  auto kBA = fx.between("B", "A");
  auto idA = fx.between("A", "A");
  auto left = compose(compose(kCB, kBA), idA);
  auto right = compose(kCB, compose(kBA, idA));
  for (int i = 0; i < 5; ++i) {
    auto row = fx.term("(name = \"P" + std::to_string(i) + "\", birth_date = 1980-05-0" +
                       std::to_string(i + 1) + ", ethnicity = \"E\")");
    auto a = ttiq::apply(left, row);
    auto b = ttiq::apply(right, row);
    CHECK(equal(a, b));
    CHECK(equal(a, ttiq::apply(kBA, ttiq::apply(kCB, row))));
  }
}

TEST_CASE("extraction mirrors the proof tree shape") {
  Fixture fx;
  Rng rng(6060);
  auto ctx = make_context(fx.sf.schema, fx.sf.env);
  for (const char* pair : {"B|A", "C|A", "Cmixed|A", "Mother|Woman", "bool|num", "num|string"}) {
    std::string text(pair);
    auto split = text.find('|');
    auto r = prove(fx.sf.env, parse_type(text.substr(0, split), ctx),
                   parse_type(text.substr(split + 1), ctx), fx.sf.schema, fx.tax, {});
    REQUIRE(r);
    auto k = extract(*r.proof);
    CHECK(proof_nodes(*r.proof) == coercion_nodes(k));
    CHECK(same_shape(*r.proof, k));
  }
  for (int i = 0; i < 40; ++i) {
    auto sc = gen_record_scenario(rng);
    auto r = prove(Environment{}, sc.sub, sc.sup, Schema{}, sc.tax, {});
    REQUIRE(r);
    auto k = extract(*r.proof, 32);
    CHECK(proof_nodes(*r.proof) == coercion_nodes(k));
    CHECK(same_shape(*r.proof, k));
  }
}

TEST_CASE("the coercion text form is stable") {
  Fixture fx;
  auto k1 = fx.between("C", "A");
  CHECK(format_coercion(k1) ==
        "record\n"
        "  field name <- name\n"
        "    identity\n"
        "  field date_of_birth <- birth_date\n"
        "    identity\n");
  CHECK(summarize_coercion(k1) == "record{name<-name, date_of_birth<-birth_date}");
}

TEST_CASE("natural orderings on the base types") {
  Fixture fx;
  Schema schema;
  auto leq = [&](const char* type, const char* a, const char* b) {
    return natural_leq(parse_type(type, fx.sf.schema), fx.term(a), fx.term(b), fx.sf.schema);
  };
  CHECK(leq("num", "2", "12") == OrderResult::LessOrEqual);
  CHECK(leq("num", "12", "2") == OrderResult::GreaterOrEqual);
  CHECK(leq("num", "-5", "2") == OrderResult::LessOrEqual);
  CHECK(leq("num", "-12", "-2") == OrderResult::LessOrEqual);  // magnitudes reverse
  CHECK(leq("num", "7", "7") == OrderResult::Equal);
  CHECK(leq("num", "99999999999999999999999999", "100000000000000000000000000") ==
        OrderResult::LessOrEqual);
  CHECK(leq("string", "\"002\"", "\"012\"") == OrderResult::LessOrEqual);
  CHECK(leq("string", "\"12\"", "\"2\"") == OrderResult::LessOrEqual);  // lexicographic
  CHECK(leq("bool", "false", "true") == OrderResult::LessOrEqual);
  CHECK(leq("date", "1989-12-31", "1990-01-01") == OrderResult::LessOrEqual);
  CHECK(leq("uri", "<urn:a>", "<urn:b>") == OrderResult::LessOrEqual);
  CHECK(leq("{'Male','Female','Unknown'}", "'Male'", "'Unknown'") == OrderResult::LessOrEqual);
  CHECK(leq("{'Male','Female','Unknown'}", "'Unknown'", "'Female'") ==
        OrderResult::GreaterOrEqual);

  CHECK(leq("a: num * b: num", "(a = 1, b = 5)", "(a = 2, b = 3)") == OrderResult::Incomparable);
  CHECK(leq("a: num * b: num", "(a = 1, b = 3)", "(a = 2, b = 3)") == OrderResult::LessOrEqual);
  CHECK(leq("a: num * b: num", "(a = 2, b = 3)", "(a = 2, b = 3)") == OrderResult::Equal);

  CHECK(leq("hasChild", "hasChild((gender='Male'), (gender='Male'))",
            "hasChild((gender='Male'), (gender='Unknown'))") == OrderResult::LessOrEqual);
  CHECK(natural_leq(parse_type("c of num -> c", ParseContext{}),
                    terms::ctor_app("c", {terms::num(1)}),
                    terms::ctor_app("d", {terms::num(2)}), schema) ==
        OrderResult::Incomparable);

  // pairs order by their first components
  CHECK(leq("exists x: num. true", "(1, true)", "(2, true)") == OrderResult::LessOrEqual);
  CHECK(leq("exists x: num. true", "(2, true)", "(2, true)") == OrderResult::Equal);

  CHECK_THROWS_AS(leq("num", "\"text\"", "1"), CoercionError);
  CHECK_THROWS_AS(leq("{'Male'}", "'Other'", "'Male'"), CoercionError);
  CHECK_THROWS_AS(leq("string -> num", "1", "2"), CoercionError);
}

TEST_CASE("padding preserves order for every pair below 10^3") {
  Fixture fx;
  auto pad3 = fx.between("num", "string", 3);
  std::vector<std::string> images;
  images.reserve(1000);
  for (int n = 0; n < 1000; ++n)
    images.push_back(ttiq::apply(pad3, terms::num(n))->as<StrLit>()->value);
  for (int m = 0; m < 1000; ++m)
    for (int n = m; n < 1000; ++n)
      REQUIRE(images[static_cast<std::size_t>(m)] <= images[static_cast<std::size_t>(n)]);
}

TEST_CASE("property: extracted coercions preserve comparable order") {
  Fixture fx;
  Rng rng(808);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    auto sc = gen_record_scenario(rng);
    auto proofs = enumerate_proofs(Environment{}, sc.sub, sc.sup, Schema{}, sc.tax, {});
    REQUIRE(!proofs.empty());
    for (const auto& proof : proofs) {
      auto k = extract(proof, 32);
      auto [lo, hi] = gen_ordered_pair(rng, sc.sub, Schema{});
      auto before = natural_leq(sc.sub, lo, hi, Schema{});
      if (before != OrderResult::LessOrEqual && before != OrderResult::Equal)
        continue;
      auto after = natural_leq(sc.sup, ttiq::apply(k, lo), ttiq::apply(k, hi), Schema{});
      CAPTURE(format_type(sc.sub));
      CAPTURE(format_type(sc.sup));
      CAPTURE(format_term(lo));
      CAPTURE(format_term(hi));
      CHECK((after == OrderResult::LessOrEqual || after == OrderResult::Equal));
      ++checked;
    }
  }
  CHECK(checked >= 150);
}

TEST_CASE("property: coerced members inhabit the target type") {
  Fixture fx;
  Rng rng(909);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    auto sc = gen_record_scenario(rng);
    auto r = prove(Environment{}, sc.sub, sc.sup, Schema{}, sc.tax, {});
    REQUIRE(r);
    auto k = extract(*r.proof, 32);
    for (int i = 0; i < 3; ++i) {
      auto member = gen_member(rng, sc.sub, Schema{});
      REQUIRE(check_membership(Environment{}, member, sc.sub, fx.reg, Schema{}).ok);
      auto image = ttiq::apply(k, member);
      CAPTURE(format_term(member));
      CHECK(check_membership(Environment{}, image, sc.sup, fx.reg, Schema{}).ok);
      ++checked;
    }
  }
  CHECK(checked == 450);
}
