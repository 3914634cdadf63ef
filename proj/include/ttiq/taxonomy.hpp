#ifndef TTIQ_TAXONOMY_HPP
#define TTIQ_TAXONOMY_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttiq/ast.hpp"

namespace ttiq {

struct TaxonomyError : Error {
  using Error::Error;
};

// The two partial orders the record and concrete subtyping rules consult:
// label order and constructor-name order. Queries answer against the
// reflexive-transitive closure of the stored edges; inserting an edge that
// would relate two distinct names in both directions is rejected.
class Taxonomy {
public:
  Taxonomy add_label_edge(const std::string& lower, const std::string& upper) const;
  Taxonomy add_ctor_edge(const std::string& lower, const std::string& upper) const;

  bool label_leq(std::string_view a, std::string_view b) const;
  bool ctor_leq(std::string_view a, std::string_view b) const;

  std::vector<std::pair<std::string, std::string>> label_edges() const;
  std::vector<std::pair<std::string, std::string>> ctor_edges() const;

  bool empty() const { return label_up_.empty() && ctor_up_.empty(); }

  // File format: lines `label <a> <= <b>` or `ctor <c> <= <c'>`; `#` comments.
  static Taxonomy load(const std::string& path);
  static Taxonomy parse(std::string_view text, const std::string& origin = "<taxonomy>");

private:
  using Edges = std::map<std::string, std::set<std::string>, std::less<>>;

  static Edges with_edge(const Edges& edges, const std::string& lower, const std::string& upper,
                         const char* what);
  static bool reachable(const Edges& edges, std::string_view from, std::string_view to);

  Edges label_up_;
  Edges ctor_up_;
};

}  // namespace ttiq

#endif
