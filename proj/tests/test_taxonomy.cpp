#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <deque>
#include <map>
#include <set>

#include "support.hpp"
#include "ttiq/taxonomy.hpp"

using namespace ttiq;
using namespace ttiq::testing;

namespace {

// Independent reachability oracle over an explicit edge list.
bool bfs_leq(const std::vector<std::pair<std::string, std::string>>& edges,
             const std::string& from, const std::string& to) {
  if (from == to)
    return true;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [lo, hi] : edges)
    adj[lo].push_back(hi);
  std::deque<std::string> queue{from};
  std::set<std::string> seen{from};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (cur == to)
      return true;
    for (const auto& next : adj[cur])
      if (seen.insert(next).second)
        queue.push_back(next);
  }
  return false;
}

}  // namespace

TEST_CASE("label order holds for inserted edges and reflexively") {
  Taxonomy tax;
  tax = tax.add_label_edge("birth_date", "date_of_birth");
  CHECK(tax.label_leq("birth_date", "date_of_birth"));
  CHECK_FALSE(tax.label_leq("date_of_birth", "birth_date"));
  CHECK(tax.label_leq("name", "name"));  // reflexive without any edge
  CHECK(tax.label_leq("birth_date", "birth_date"));
}

TEST_CASE("self edges are no-ops and antisymmetry is enforced") {
  Taxonomy tax;
  tax = tax.add_label_edge("a", "a");
  CHECK(tax.label_edges().empty());
  tax = tax.add_label_edge("birth_date", "date_of_birth");
  CHECK_THROWS_AS(tax.add_label_edge("date_of_birth", "birth_date"), TaxonomyError);
  tax = tax.add_label_edge("date_of_birth", "dob_iso");
  CHECK_THROWS_AS(tax.add_label_edge("dob_iso", "birth_date"), TaxonomyError);  // long cycle
}

TEST_CASE("transitive chains are reachable") {
  Taxonomy tax;
  tax = tax.add_label_edge("x", "y").add_label_edge("y", "z");
  CHECK(tax.label_leq("x", "z"));
  CHECK_FALSE(tax.label_leq("z", "x"));
}

TEST_CASE("ctor order is independent of label order") {
  Taxonomy tax;
  tax = tax.add_ctor_edge("hasChild", "hasRelative");
  CHECK(tax.ctor_leq("hasChild", "hasRelative"));
  CHECK_FALSE(tax.label_leq("hasChild", "hasRelative"));
}

TEST_CASE("taxonomy files load to the same closure as add calls") {
  TempDir dir("tax");
  auto path = dir.write("t.tax", R"(# comment
label birth_date <= date_of_birth
label dob <= birth_date

ctor hasChild <= hasRelative  # trailing comment
)");
  auto tax = Taxonomy::load(path);
  CHECK(tax.label_leq("dob", "date_of_birth"));
  CHECK(tax.ctor_leq("hasChild", "hasRelative"));
  CHECK(tax.label_edges().size() == 2);

  auto empty = Taxonomy::parse("");
  CHECK(empty.empty());
  CHECK(empty.label_leq("q", "q"));

  CHECK_THROWS_AS(Taxonomy::parse("label a <= b\nlabel b <= a\n"), TaxonomyError);
  CHECK_THROWS_AS(Taxonomy::parse("label a b\n"), TaxonomyError);
  CHECK_THROWS_AS(Taxonomy::parse("edge a <= b\n"), TaxonomyError);
  CHECK_THROWS_AS(Taxonomy::load("/nonexistent/t.tax"), TaxonomyError);
}

TEST_CASE("property: closure matches brute-force reachability on random dags") {
  Rng rng(7771);
  for (int round = 0; round < 60; ++round) {
    int nodes = pick(rng, 2, 20);
    std::vector<std::string> names;
    for (int i = 0; i < nodes; ++i)
      names.push_back("n" + std::to_string(i));

    Taxonomy tax;
    std::vector<std::pair<std::string, std::string>> accepted;
    int attempts = pick(rng, 1, 40);
    for (int i = 0; i < attempts; ++i) {
      const auto& lo = names[static_cast<std::size_t>(pick(rng, 0, nodes - 1))];
      const auto& hi = names[static_cast<std::size_t>(pick(rng, 0, nodes - 1))];
      try {
        tax = tax.add_label_edge(lo, hi);
        if (lo != hi)
          accepted.emplace_back(lo, hi);
      } catch (const TaxonomyError&) {
        // cycle-creating edge: the oracle must agree the reverse path exists
        CHECK(bfs_leq(accepted, hi, lo));
      }
    }
    for (const auto& a : names)
      for (const auto& b : names)
        CHECK(tax.label_leq(a, b) == bfs_leq(accepted, a, b));
  }
}

TEST_CASE("queries never mutate the taxonomy") {
  Taxonomy tax;
  tax = tax.add_label_edge("a", "b");
  auto before = tax.label_edges();
  (void)tax.label_leq("a", "b");
  (void)tax.label_leq("zzz", "qqq");
  CHECK(tax.label_edges() == before);
}
