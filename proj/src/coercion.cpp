#include "ttiq/coercion.hpp"

#include <algorithm>

namespace ttiq {

std::string_view order_name(OrderResult r) {
  switch (r) {
    case OrderResult::LessOrEqual: return "LessOrEqual";
    case OrderResult::GreaterOrEqual: return "GreaterOrEqual";
    case OrderResult::Equal: return "Equal";
    case OrderResult::Incomparable: return "Incomparable";
  }
  return "?";
}

// --- extraction ---------------------------------------------------------------

Coercion extract(const ProofTree& proof, int pad_width) {
  Coercion k;
  k.source = proof.conclusion.sub;
  k.target = proof.conclusion.sup;
  switch (proof.rule) {
    case Rule::Identity:
      k.kind = Coercion::Kind::Identity;
      break;
    case Rule::StrPrim: {
      const auto* prim = proof.conclusion.sub->as<PrimitiveType>();
      if (!prim)
        throw CoercionError("STR-PRIM proof over a non-primitive type");
      if (prim->kind == Prim::Num) {
        k.kind = Coercion::Kind::NumToStringPadded;
        k.pad_width = proof.pad_width_hint.value_or(pad_width);
        if (k.pad_width < 1)
          throw CoercionError("pad width must be at least 1");
      } else {
        k.kind = Coercion::Kind::PrimToString;
        k.prim_from = prim->kind;
      }
      break;
    }
    case Rule::BoolNum:
      k.kind = Coercion::Kind::BoolToNum;
      break;
    case Rule::SynRec:
    case Rule::SemRec: {
      k.kind = Coercion::Kind::Record;
      k.matching = proof.matching;
      const auto* sub_rec = proof.conclusion.sub->as<RecordType>();
      const auto* sup_rec = proof.conclusion.sup->as<RecordType>();
      if (!sub_rec || !sup_rec)
        throw CoercionError("record-rule proof over non-record types");
      for (std::size_t j = 0; j < proof.matching.size(); ++j)
        k.relabels.emplace_back(sub_rec->fields[proof.matching[j]].label,
                                sup_rec->fields[j].label);
      for (const auto& premise : proof.premises)
        k.children.push_back(extract(premise, pad_width));
      break;
    }
    case Rule::Concrete: {
      k.kind = Coercion::Kind::CtorMap;
      const auto* sub_con = proof.conclusion.sub->as<ConcreteType>();
      const auto* sup_con = proof.conclusion.sup->as<ConcreteType>();
      if (!sub_con || !sup_con)
        throw CoercionError("CONCRETE proof over non-concrete types");
      k.from_ctor = sub_con->ctor;
      k.to_ctor = sup_con->ctor;
      for (const auto& premise : proof.premises)
        k.children.push_back(extract(premise, pad_width));
      break;
    }
    case Rule::ExistsFirst:
      // The printed table maps (t, p) to t unchanged, but composing with the
      // premise coercion is what lands the witness in the target type.
      k.kind = Coercion::Kind::SumProject;
      k.children.push_back(extract(proof.premises.at(0), pad_width));
      break;
  }
  return k;
}

// --- application --------------------------------------------------------------

TermPtr apply(const Coercion& k, const TermPtr& t) {
  switch (k.kind) {
    case Coercion::Kind::Identity:
      return t;
    case Coercion::Kind::PrimToString:
      switch (k.prim_from) {
        case Prim::String:
          if (!t->is<StrLit>())
            throw CoercionError("prim-to-string expected a string literal");
          return t;
        case Prim::Date: {
          const auto* d = t->as<DateLit>();
          if (!d)
            throw CoercionError("prim-to-string expected a date literal");
          return terms::str(d->value.iso());
        }
        case Prim::Bool: {
          const auto* b = t->as<BoolLit>();
          if (!b)
            throw CoercionError("prim-to-string expected a bool literal");
          return terms::str(b->value ? "true" : "false");
        }
        case Prim::Uri: {
          const auto* u = t->as<UriLit>();
          if (!u)
            throw CoercionError("prim-to-string expected a uri literal");
          return terms::str(u->value);
        }
        case Prim::Num:
          throw CoercionError("num is padded, not quoted");
      }
      throw CoercionError("unreachable");
    case Coercion::Kind::NumToStringPadded: {
      const auto* n = t->as<NumLit>();
      if (!n)
        throw CoercionError("num-to-string expected a number literal");
      if (n->value.negative())
        throw CoercionError("cannot pad a negative number");
      if (n->value.digit_count() > static_cast<std::size_t>(k.pad_width))
        throw CoercionError(n->value.str() + " does not fit in pad width " +
                            std::to_string(k.pad_width));
      std::string digits = n->value.digits();
      return terms::str(std::string(k.pad_width - digits.size(), '0') + digits);
    }
    case Coercion::Kind::BoolToNum: {
      const auto* b = t->as<BoolLit>();
      if (!b)
        throw CoercionError("bool-to-num expected a bool literal");
      return terms::num(b->value ? 1 : 0);
    }
    case Coercion::Kind::Record: {
      const auto* rec = t->as<RecordTerm>();
      if (!rec)
        throw CoercionError("record coercion expected a record term");
      std::vector<TermField> fields;
      for (std::size_t j = 0; j < k.relabels.size(); ++j) {
        const auto* field = rec->find(k.relabels[j].first);
        if (!field)
          throw CoercionError("record term lacks field '" + k.relabels[j].first + "'");
        fields.push_back({k.relabels[j].second, ttiq::apply(k.children[j], field->value)});
      }
      return terms::record(std::move(fields));
    }
    case Coercion::Kind::SumProject: {
      const auto* p = t->as<PairTerm>();
      if (!p)
        throw CoercionError("sum projection expected a pair");
      return ttiq::apply(k.children.at(0), p->first);
    }
    case Coercion::Kind::CtorMap: {
      const auto* app = t->as<CtorApp>();
      if (!app || app->ctor != k.from_ctor)
        throw CoercionError("ctor coercion expected an application of '" + k.from_ctor + "'");
      if (app->args.size() != k.children.size())
        throw CoercionError("ctor application arity mismatch");
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < app->args.size(); ++i)
        args.push_back(ttiq::apply(k.children[i], app->args[i]));
      return terms::ctor_app(k.to_ctor, std::move(args));
    }
    case Coercion::Kind::Seq:
      return ttiq::apply(k.children.at(1), ttiq::apply(k.children.at(0), t));
  }
  throw CoercionError("unreachable");
}

Coercion compose(const Coercion& first, const Coercion& second) {
  if (first.target && second.source && !equal(first.target, second.source))
    throw CoercionError("type mismatch at the seam of a coercion composition");
  if (first.kind == Coercion::Kind::Identity)
    return second;
  if (second.kind == Coercion::Kind::Identity)
    return first;
  Coercion k;
  k.kind = Coercion::Kind::Seq;
  k.children = {first, second};
  k.source = first.source;
  k.target = second.target;
  return k;
}

// --- natural orderings --------------------------------------------------------

namespace {

OrderResult from_ordering(std::strong_ordering o) {
  if (o == std::strong_ordering::less)
    return OrderResult::LessOrEqual;
  if (o == std::strong_ordering::greater)
    return OrderResult::GreaterOrEqual;
  return OrderResult::Equal;
}

OrderResult from_compare(int c) {
  if (c < 0)
    return OrderResult::LessOrEqual;
  if (c > 0)
    return OrderResult::GreaterOrEqual;
  return OrderResult::Equal;
}

OrderResult combine(OrderResult acc, OrderResult next) {
  if (acc == OrderResult::Incomparable || next == OrderResult::Incomparable)
    return OrderResult::Incomparable;
  if (next == OrderResult::Equal)
    return acc;
  if (acc == OrderResult::Equal)
    return next;
  return acc == next ? acc : OrderResult::Incomparable;
}

[[noreturn]] void type_mismatch(const char* what) {
  throw CoercionError(std::string("terms are not members of the ordered type (") + what + ")");
}

OrderResult order(const TypePtr& type, const TermPtr& a, const TermPtr& b) {
  return std::visit(
      [&](const auto& x) -> OrderResult {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PrimitiveType>) {
          switch (x.kind) {
            case Prim::String: {
              const auto* sa = a->as<StrLit>();
              const auto* sb = b->as<StrLit>();
              if (!sa || !sb)
                type_mismatch("string");
              return from_compare(sa->value.compare(sb->value));
            }
            case Prim::Num: {
              const auto* na = a->as<NumLit>();
              const auto* nb = b->as<NumLit>();
              if (!na || !nb)
                type_mismatch("num");
              return from_ordering(na->value <=> nb->value);
            }
            case Prim::Bool: {
              const auto* ba = a->as<BoolLit>();
              const auto* bb = b->as<BoolLit>();
              if (!ba || !bb)
                type_mismatch("bool");
              return from_compare((ba->value ? 1 : 0) - (bb->value ? 1 : 0));
            }
            case Prim::Uri: {
              const auto* ua = a->as<UriLit>();
              const auto* ub = b->as<UriLit>();
              if (!ua || !ub)
                type_mismatch("uri");
              return from_compare(ua->value.compare(ub->value));
            }
            case Prim::Date: {
              const auto* da = a->as<DateLit>();
              const auto* db = b->as<DateLit>();
              if (!da || !db)
                type_mismatch("date");
              return from_ordering(da->value <=> db->value);
            }
          }
          type_mismatch("primitive");
        } else if constexpr (std::is_same_v<T, EnumeratedType>) {
          const auto* sa = a->as<StrLit>();
          const auto* sb = b->as<StrLit>();
          if (!sa || !sb)
            type_mismatch("enumeration");
          auto ia = std::find(x.values.begin(), x.values.end(), sa->value);
          auto ib = std::find(x.values.begin(), x.values.end(), sb->value);
          if (ia == x.values.end() || ib == x.values.end())
            type_mismatch("enumeration value");
          return from_compare(int(ia - x.values.begin()) - int(ib - x.values.begin()));
        } else if constexpr (std::is_same_v<T, RecordType>) {
          const auto* ra = a->as<RecordTerm>();
          const auto* rb = b->as<RecordTerm>();
          if (!ra || !rb)
            type_mismatch("record");
          OrderResult acc = OrderResult::Equal;
          for (const auto& field : x.fields) {
            const auto* fa = ra->find(field.label);
            const auto* fb = rb->find(field.label);
            if (!fa || !fb)
              type_mismatch("record field");
            acc = combine(acc, order(field.type, fa->value, fb->value));
            if (acc == OrderResult::Incomparable)
              return acc;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, ConcreteType>) {
          const auto* ca = a->as<CtorApp>();
          const auto* cb = b->as<CtorApp>();
          if (!ca || !cb)
            type_mismatch("constructor application");
          if (ca->ctor != cb->ctor)
            return OrderResult::Incomparable;
          if (ca->args.size() != x.args.size() || cb->args.size() != x.args.size())
            type_mismatch("constructor arity");
          OrderResult acc = OrderResult::Equal;
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            acc = combine(acc, order(x.args[i], ca->args[i], cb->args[i]));
            if (acc == OrderResult::Incomparable)
              return acc;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, DepSumType>) {
          const auto* pa = a->as<PairTerm>();
          const auto* pb = b->as<PairTerm>();
          if (!pa || !pb)
            type_mismatch("pair");
          return order(x.domain, pa->first, pb->first);
        } else if constexpr (std::is_same_v<T, PropType>) {
          const auto* ba = a->as<BoolLit>();
          const auto* bb = b->as<BoolLit>();
          if (!ba || !bb)
            type_mismatch("proposition");
          return from_compare((ba->value ? 1 : 0) - (bb->value ? 1 : 0));
        } else {
          throw CoercionError("no natural ordering for this type form");
        }
      },
      type->node());
}

}  // namespace

OrderResult natural_leq(const TypePtr& type, const TermPtr& a, const TermPtr& b,
                        const Schema& schema) {
  return order(resolve_deep(type, schema), a, b);
}

// --- text forms -----------------------------------------------------------------

namespace {

void format_node(const Coercion& k, int indent, std::string& out) {
  out.append(indent, ' ');
  switch (k.kind) {
    case Coercion::Kind::Identity:
      out += "identity\n";
      break;
    case Coercion::Kind::PrimToString:
      out += "prim-to-string ";
      out += prim_name(k.prim_from);
      out += '\n';
      break;
    case Coercion::Kind::NumToStringPadded:
      out += "num-to-string-padded " + std::to_string(k.pad_width) + "\n";
      break;
    case Coercion::Kind::BoolToNum:
      out += "bool-to-num\n";
      break;
    case Coercion::Kind::Record:
      out += "record\n";
      for (std::size_t j = 0; j < k.children.size(); ++j) {
        out.append(indent + 2, ' ');
        out += "field " + k.relabels[j].second + " <- " + k.relabels[j].first + "\n";
        format_node(k.children[j], indent + 4, out);
      }
      break;
    case Coercion::Kind::SumProject:
      out += "sum-project\n";
      format_node(k.children.at(0), indent + 2, out);
      break;
    case Coercion::Kind::CtorMap:
      out += "ctor-map " + k.from_ctor + " -> " + k.to_ctor + "\n";
      for (const auto& child : k.children)
        format_node(child, indent + 2, out);
      break;
    case Coercion::Kind::Seq:
      out += "seq\n";
      format_node(k.children.at(0), indent + 2, out);
      format_node(k.children.at(1), indent + 2, out);
      break;
  }
}

}  // namespace

std::string format_coercion(const Coercion& k) {
  std::string out;
  format_node(k, 0, out);
  return out;
}

std::string summarize_coercion(const Coercion& k) {
  switch (k.kind) {
    case Coercion::Kind::Identity:
      return "identity";
    case Coercion::Kind::PrimToString:
      return "to-string(" + std::string(prim_name(k.prim_from)) + ")";
    case Coercion::Kind::NumToStringPadded:
      return "num-pad(" + std::to_string(k.pad_width) + ")";
    case Coercion::Kind::BoolToNum:
      return "bool-to-num";
    case Coercion::Kind::Record: {
      std::string out = "record{";
      for (std::size_t j = 0; j < k.relabels.size(); ++j) {
        if (j)
          out += ", ";
        out += k.relabels[j].second + "<-" + k.relabels[j].first;
      }
      return out + "}";
    }
    case Coercion::Kind::SumProject:
      return "project(" + summarize_coercion(k.children.at(0)) + ")";
    case Coercion::Kind::CtorMap:
      return "ctor(" + k.from_ctor + "->" + k.to_ctor + ")";
    case Coercion::Kind::Seq:
      return summarize_coercion(k.children.at(0)) + "; " + summarize_coercion(k.children.at(1));
  }
  return "?";
}

}  // namespace ttiq
