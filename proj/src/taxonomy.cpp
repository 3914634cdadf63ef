#include "ttiq/taxonomy.hpp"

#include <deque>
#include <fstream>
#include <sstream>

namespace ttiq {

bool Taxonomy::reachable(const Edges& edges, std::string_view from, std::string_view to) {
  if (from == to)
    return true;
  std::deque<std::string_view> queue{from};
  std::set<std::string_view> seen{from};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    auto it = edges.find(cur);
    if (it == edges.end())
      continue;
    for (const auto& next : it->second) {
      if (next == to)
        return true;
      if (seen.insert(next).second)
        queue.push_back(next);
    }
  }
  return false;
}

Taxonomy::Edges Taxonomy::with_edge(const Edges& edges, const std::string& lower,
                                    const std::string& upper, const char* what) {
  if (lower == upper)
    return edges;  // reflexivity holds without an edge
  if (reachable(edges, upper, lower))
    throw TaxonomyError(std::string(what) + " edge " + lower + " <= " + upper +
                        " would create a cycle");
  Edges out = edges;
  out[lower].insert(upper);
  return out;
}

Taxonomy Taxonomy::add_label_edge(const std::string& lower, const std::string& upper) const {
  Taxonomy out = *this;
  out.label_up_ = with_edge(label_up_, lower, upper, "label");
  return out;
}

Taxonomy Taxonomy::add_ctor_edge(const std::string& lower, const std::string& upper) const {
  Taxonomy out = *this;
  out.ctor_up_ = with_edge(ctor_up_, lower, upper, "ctor");
  return out;
}

bool Taxonomy::label_leq(std::string_view a, std::string_view b) const {
  return reachable(label_up_, a, b);
}

bool Taxonomy::ctor_leq(std::string_view a, std::string_view b) const {
  return reachable(ctor_up_, a, b);
}

std::vector<std::pair<std::string, std::string>> Taxonomy::label_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [lower, uppers] : label_up_)
    for (const auto& upper : uppers)
      out.emplace_back(lower, upper);
  return out;
}

std::vector<std::pair<std::string, std::string>> Taxonomy::ctor_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [lower, uppers] : ctor_up_)
    for (const auto& upper : uppers)
      out.emplace_back(lower, upper);
  return out;
}

Taxonomy Taxonomy::parse(std::string_view text, const std::string& origin) {
  Taxonomy out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string kind, lower, leq, upper;
    if (!(ls >> kind))
      continue;  // blank
    auto fail = [&](const std::string& msg) {
      throw TaxonomyError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (!(ls >> lower >> leq >> upper) || leq != "<=")
      fail("expected '<kind> <lower> <= <upper>'");
    std::string extra;
    if (ls >> extra)
      fail("trailing input '" + extra + "'");
    try {
      if (kind == "label")
        out = out.add_label_edge(lower, upper);
      else if (kind == "ctor")
        out = out.add_ctor_edge(lower, upper);
      else
        fail("unknown edge kind '" + kind + "'");
    } catch (const TaxonomyError& e) {
      fail(e.what());
    }
  }
  return out;
}

Taxonomy Taxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw TaxonomyError("cannot open taxonomy file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

}  // namespace ttiq
