#include "ttiq/prover.hpp"

#include <algorithm>
#include <functional>

#include "ttiq/printer.hpp"

namespace ttiq {

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::Identity: return "IDENTITY";
    case Rule::StrPrim: return "STR-PRIM";
    case Rule::BoolNum: return "BOOL-NUM";
    case Rule::SynRec: return "SYN-REC";
    case Rule::SemRec: return "SEM-REC";
    case Rule::Concrete: return "CONCRETE";
    case Rule::ExistsFirst: return "EXISTS-FIRST";
  }
  return "?";
}

namespace {

class Search {
public:
  Search(std::shared_ptr<const Environment> env, const Taxonomy& tax)
      : env_(std::move(env)), tax_(tax) {}

  bool exhausted() const { return exhausted_; }

  // Up to `want` proofs of sub <= sup, deterministic order.
  std::vector<ProofTree> proofs(const TypePtr& sub, const TypePtr& sup, int depth, int want) {
    std::vector<ProofTree> out;
    if (want <= 0)
      return out;
    if (depth <= 0) {
      exhausted_ = true;
      return out;
    }

    auto leaf = [&](Rule rule) {
      out.push_back(ProofTree{rule, Judgment{env_, sub, sup}, {}, {}, std::nullopt});
    };

    // IDENTITY
    if (equal(sub, sup))
      leaf(Rule::Identity);
    if ((int)out.size() >= want)
      return out;

    // STR-PRIM
    if (sub->is<PrimitiveType>() && is_prim(sup, Prim::String) && !equal(sub, sup))
      leaf(Rule::StrPrim);
    if ((int)out.size() >= want)
      return out;

    // BOOL-NUM
    if (is_prim(sub, Prim::Bool) && is_prim(sup, Prim::Num))
      leaf(Rule::BoolNum);
    if ((int)out.size() >= want)
      return out;

    const auto* sub_rec = sub->as<RecordType>();
    const auto* sup_rec = sup->as<RecordType>();

    // SYN-REC: identical labels, order-insensitive, extra subtype fields allowed
    if (sub_rec && sup_rec) {
      std::vector<std::size_t> matching;
      bool total = true;
      for (const auto& sup_field : sup_rec->fields) {
        bool found = false;
        for (std::size_t i = 0; i < sub_rec->fields.size(); ++i) {
          if (sub_rec->fields[i].label == sup_field.label) {
            matching.push_back(i);
            found = true;
            break;
          }
        }
        if (!found) {
          total = false;
          break;
        }
      }
      if (total)
        record_rule(Rule::SynRec, *sub_rec, *sup_rec, matching, sub, sup, depth, want, out);
    }
    if ((int)out.size() >= want)
      return out;

    // SEM-REC: labels related by the taxonomy, injective matching
    if (sub_rec && sup_rec) {
      std::vector<std::size_t> matching;
      std::vector<bool> used(sub_rec->fields.size(), false);
      sem_rec_matchings(*sub_rec, *sup_rec, 0, matching, used, sub, sup, depth, want, out);
    }
    if ((int)out.size() >= want)
      return out;

    // CONCRETE
    const auto* sub_con = sub->as<ConcreteType>();
    const auto* sup_con = sup->as<ConcreteType>();
    if (sub_con && sup_con && sub_con->args.size() == sup_con->args.size() &&
        tax_.ctor_leq(sub_con->ctor, sup_con->ctor)) {
      std::vector<std::vector<ProofTree>> premise_lists;
      bool viable = true;
      for (std::size_t i = 0; i < sub_con->args.size(); ++i) {
        premise_lists.push_back(proofs(sub_con->args[i], sup_con->args[i], depth - 1, want));
        if (premise_lists.back().empty()) {
          viable = false;
          break;
        }
      }
      if (viable) {
        each_combination(premise_lists, want, [&](std::vector<ProofTree> premises) {
          out.push_back(ProofTree{Rule::Concrete, Judgment{env_, sub, sup}, std::move(premises),
                                  {}, std::nullopt});
          return (int)out.size() < want;
        });
      }
    }
    if ((int)out.size() >= want)
      return out;

    // EXISTS-FIRST: exists x: T. T' <= U  when  T <= U
    if (const auto* dep = sub->as<DepSumType>()) {
      auto inner = proofs(dep->domain, sup, depth - 1, want);
      for (auto& premise : inner) {
        out.push_back(ProofTree{Rule::ExistsFirst, Judgment{env_, sub, sup},
                                {std::move(premise)}, {}, std::nullopt});
        if ((int)out.size() >= want)
          break;
      }
    }
    return out;
  }

private:
  std::shared_ptr<const Environment> env_;
  const Taxonomy& tax_;
  bool exhausted_ = false;

  // Calls fn with each combination of one premise per list, rightmost varying
  // fastest; fn returns false to stop.
  static void each_combination(const std::vector<std::vector<ProofTree>>& lists, int cap,
                               const std::function<bool(std::vector<ProofTree>)>& fn) {
    std::vector<std::size_t> idx(lists.size(), 0);
    int produced = 0;
    while (produced < cap) {
      std::vector<ProofTree> combo;
      combo.reserve(lists.size());
      for (std::size_t i = 0; i < lists.size(); ++i)
        combo.push_back(lists[i][idx[i]]);
      ++produced;
      if (!fn(std::move(combo)))
        return;
      // advance
      std::size_t i = lists.size();
      while (i-- > 0) {
        if (++idx[i] < lists[i].size())
          break;
        idx[i] = 0;
        if (i == 0)
          return;
      }
      if (lists.empty())
        return;
    }
  }

  void record_rule(Rule rule, const RecordType& sub_rec, const RecordType& sup_rec,
                   const std::vector<std::size_t>& matching, const TypePtr& sub,
                   const TypePtr& sup, int depth, int want, std::vector<ProofTree>& out) {
    std::vector<std::vector<ProofTree>> premise_lists;
    for (std::size_t j = 0; j < sup_rec.fields.size(); ++j) {
      premise_lists.push_back(
          proofs(sub_rec.fields[matching[j]].type, sup_rec.fields[j].type, depth - 1, want));
      if (premise_lists.back().empty())
        return;
    }
    each_combination(premise_lists, want, [&](std::vector<ProofTree> premises) {
      out.push_back(
          ProofTree{rule, Judgment{env_, sub, sup}, std::move(premises), matching, std::nullopt});
      return (int)out.size() < want;
    });
  }

  // Enumerates injective matchings in lexicographic order (supertype fields
  // major, subtype candidates ascending). The all-labels-identical matching is
  // SYN-REC's and is skipped here.
  void sem_rec_matchings(const RecordType& sub_rec, const RecordType& sup_rec, std::size_t j,
                         std::vector<std::size_t>& matching, std::vector<bool>& used,
                         const TypePtr& sub, const TypePtr& sup, int depth, int want,
                         std::vector<ProofTree>& out) {
    if ((int)out.size() >= want)
      return;
    if (j == sup_rec.fields.size()) {
      bool syntactic = true;
      for (std::size_t k = 0; k < matching.size(); ++k) {
        if (sub_rec.fields[matching[k]].label != sup_rec.fields[k].label) {
          syntactic = false;
          break;
        }
      }
      if (!syntactic)
        record_rule(Rule::SemRec, sub_rec, sup_rec, matching, sub, sup, depth, want, out);
      return;
    }
    for (std::size_t i = 0; i < sub_rec.fields.size(); ++i) {
      if (used[i] || !tax_.label_leq(sub_rec.fields[i].label, sup_rec.fields[j].label))
        continue;
      used[i] = true;
      matching.push_back(i);
      sem_rec_matchings(sub_rec, sup_rec, j + 1, matching, used, sub, sup, depth, want, out);
      matching.pop_back();
      used[i] = false;
    }
  }
};

}  // namespace

ProveResult prove(const Environment& env, const TypePtr& sub, const TypePtr& sup,
                  const Schema& schema, const Taxonomy& tax, const ProverLimits& limits) {
  auto shared_env = std::make_shared<Environment>(env);
  Search search(shared_env, tax);
  auto found =
      search.proofs(resolve_deep(sub, schema), resolve_deep(sup, schema), limits.max_depth, 1);
  if (!found.empty())
    return ProveResult{ProveOutcome::Proved, std::move(found.front())};
  return ProveResult{search.exhausted() ? ProveOutcome::DepthExhausted : ProveOutcome::Refuted,
                     std::nullopt};
}

std::vector<ProofTree> enumerate_proofs(const Environment& env, const TypePtr& sub,
                                        const TypePtr& sup, const Schema& schema,
                                        const Taxonomy& tax, const ProverLimits& limits) {
  auto shared_env = std::make_shared<Environment>(env);
  Search search(shared_env, tax);
  return search.proofs(resolve_deep(sub, schema), resolve_deep(sup, schema), limits.max_depth,
                       limits.max_proofs);
}

bool check_rule(const ProofTree& node, const Taxonomy& tax) {
  const TypePtr& sub = node.conclusion.sub;
  const TypePtr& sup = node.conclusion.sup;
  if (!sub || !sup)
    return false;

  auto check_premises = [&]() {
    return std::all_of(node.premises.begin(), node.premises.end(),
                       [&](const ProofTree& p) { return check_rule(p, tax); });
  };

  switch (node.rule) {
    case Rule::Identity:
      return node.premises.empty() && equal(sub, sup);
    case Rule::StrPrim:
      return node.premises.empty() && sub->is<PrimitiveType>() && is_prim(sup, Prim::String);
    case Rule::BoolNum:
      return node.premises.empty() && is_prim(sub, Prim::Bool) && is_prim(sup, Prim::Num);
    case Rule::SynRec:
    case Rule::SemRec: {
      const auto* sub_rec = sub->as<RecordType>();
      const auto* sup_rec = sup->as<RecordType>();
      if (!sub_rec || !sup_rec)
        return false;
      const std::size_t n = sup_rec->fields.size();
      if (node.matching.size() != n || node.premises.size() != n)
        return false;
      std::vector<bool> used(sub_rec->fields.size(), false);
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t i = node.matching[j];
        if (i >= sub_rec->fields.size() || used[i])
          return false;  // out of range or not injective
        used[i] = true;
        const auto& sub_field = sub_rec->fields[i];
        const auto& sup_field = sup_rec->fields[j];
        if (node.rule == Rule::SynRec) {
          if (sub_field.label != sup_field.label)
            return false;
        } else {
          if (!tax.label_leq(sub_field.label, sup_field.label))
            return false;
        }
        if (!equal(node.premises[j].conclusion.sub, sub_field.type) ||
            !equal(node.premises[j].conclusion.sup, sup_field.type))
          return false;
      }
      return check_premises();
    }
    case Rule::Concrete: {
      const auto* sub_con = sub->as<ConcreteType>();
      const auto* sup_con = sup->as<ConcreteType>();
      if (!sub_con || !sup_con || sub_con->args.size() != sup_con->args.size())
        return false;
      if (!tax.ctor_leq(sub_con->ctor, sup_con->ctor))
        return false;
      if (node.premises.size() != sub_con->args.size())
        return false;
      for (std::size_t i = 0; i < sub_con->args.size(); ++i) {
        if (!equal(node.premises[i].conclusion.sub, sub_con->args[i]) ||
            !equal(node.premises[i].conclusion.sup, sup_con->args[i]))
          return false;
      }
      return check_premises();
    }
    case Rule::ExistsFirst: {
      const auto* dep = sub->as<DepSumType>();
      if (!dep || node.premises.size() != 1)
        return false;
      if (!equal(node.premises[0].conclusion.sub, dep->domain) ||
          !equal(node.premises[0].conclusion.sup, sup))
        return false;
      return check_premises();
    }
  }
  return false;
}

static void format_proof_node(const ProofTree& node, int indent, std::string& out) {
  out.append(indent, ' ');
  out += rule_name(node.rule);
  if (!node.matching.empty()) {
    const auto* sub_rec = node.conclusion.sub->as<RecordType>();
    const auto* sup_rec = node.conclusion.sup->as<RecordType>();
    if (sub_rec && sup_rec) {
      out += " [";
      for (std::size_t j = 0; j < node.matching.size(); ++j) {
        if (j)
          out += ", ";
        out += j < sup_rec->fields.size() ? sup_rec->fields[j].label : "?";
        out += " <- ";
        // trees that failed check_rule may carry an out-of-range matching
        out += node.matching[j] < sub_rec->fields.size()
                   ? sub_rec->fields[node.matching[j]].label
                   : "?";
      }
      out += ']';
    }
  }
  out += ": ";
  out += format_type(node.conclusion.sub);
  out += " <= ";
  out += format_type(node.conclusion.sup);
  out += '\n';
  for (const auto& premise : node.premises)
    format_proof_node(premise, indent + 2, out);
}

std::string format_proof(const ProofTree& proof) {
  std::string out;
  format_proof_node(proof, 0, out);
  return out;
}

}  // namespace ttiq
