/*
 * Copyright (c) 2026, the tlids authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cassert>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tlids/expand.hpp"
#include "tlids/formula.hpp"
#include "tlids/trace.hpp"
#include "tlids/validate.hpp"

namespace tlids {

/// Cost proxies of one evaluation: eval_count counts every
/// (subformula, scope) visit, memo hits included; memo_entries is the
/// peak number of distinct memoized (subformula, scope) keys.
struct EvalStats {
  bool result = false;
  std::uint64_t eval_count = 0;
  std::uint64_t memo_entries = 0;
};

// ---------------------------------------------------------------------------
// Finite-trace semantics.
//
// Propositional: formulas read one event.
// LTL: formulas read the suffix starting at a position. Next is strong;
//      Until requires its witness inside the trace.
// ITL: formulas read an interval [lo, hi]; atoms hold at the FIRST event;
//      chop splits at a shared fusion point; chop-star admits zero chunks
//      only on a point interval.
// RASL: ITL plus skip (exactly two events) and elapsed-time constraints.
//
// The evaluator is total over valid formulas; derived connectives are
// evaluated by their defining rules, so expansion and direct evaluation
// can be checked against each other.
// ---------------------------------------------------------------------------

class Evaluator {
 public:
  /// `exhaustive` switches off every internal short-circuit (Boolean
  /// operators, witness searches, fusion-point scans). Results are
  /// unchanged; only the cost statistics grow. Cost comparisons run in
  /// this mode so a formula pays for its whole structure.
  Evaluator(const Trace& trace, Logic logic, Formula root, bool exhaustive = false)
      : trace_(&trace), logic_(logic), root_(std::move(root)), exhaustive_(exhaustive) {
    index(root_, {});
  }

  Logic logic() const { return logic_; }
  const Formula& root() const { return root_; }

  /// Propositional reading of event `idx`.
  bool at_event(std::size_t idx) { return ev_prop(root_, idx); }

  /// LTL reading of the suffix starting at `pos`.
  bool at_position(std::size_t pos) { return ev_ltl(root_, pos); }

  /// ITL/RASL reading of the interval [lo, hi].
  bool on_window(std::size_t lo, std::size_t hi) { return ev_itl(root_, lo, hi); }

  std::uint64_t eval_count() const { return count_; }
  std::uint64_t memo_entries() const { return memo_.size(); }

 private:
  struct Binding {
    const std::string* name;
    bool bound;
    AttrValue value;
  };

  struct NodeInfo {
    std::uint32_t id;
    bool closed;  // no free variable references: safe to memoize
  };

  void index(const Formula& f, std::vector<const std::string*> scope) {
    walk(f, scope);
  }

  bool walk(const Formula& f, std::vector<const std::string*>& scope) {
    if (!f) return true;
    bool closed = true;
    // A reference to an enclosing binder makes the node environment
    // dependent; such nodes must not share memo entries across bindings.
    if (f->kind == NodeKind::AttrCmp && f->rhs == Node::Rhs::Var) {
      for (auto* n : scope)
        if (*n == f->str) closed = false;
    }
    if (f->kind == NodeKind::ForAllAttr || f->kind == NodeKind::LetAttr) {
      scope.push_back(&f->name);
      bool sub = walk(f->a, scope);
      scope.pop_back();
      closed = closed && sub;
    } else {
      bool sa = walk(f->a, scope);
      bool sb = walk(f->b, scope);
      closed = closed && sa && sb;
    }
    auto [it, inserted] = info_.emplace(f.get(), NodeInfo{next_id_, closed});
    if (inserted) ++next_id_;
    else it->second.closed = it->second.closed && closed;  // shared subtree
    return closed;
  }

  bool walk(const Formula& f, std::vector<const std::string*>&& scope) {
    auto s = std::move(scope);
    return walk(f, s);
  }

  const NodeInfo& info(const Node* n) const { return info_.at(n); }

  // Scope is packed as (pos) for positions/events and (lo, hi) for windows.
  static std::uint64_t key(std::uint32_t id, std::size_t a, std::size_t b) {
    return (static_cast<std::uint64_t>(id) << 42) |
           (static_cast<std::uint64_t>(a) << 21) | static_cast<std::uint64_t>(b);
  }

  const Binding* lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (*it->name == name) return &*it;
    return nullptr;
  }

  bool cmp_attr(const Node& n, const Event& e) const {
    const AttrValue* v = e.attr(n.name);
    if (!v) return false;
    switch (n.rhs) {
      case Node::Rhs::Number:
        return attr_is_numeric(*v) && cmp_apply(n.op, attr_as_double(*v), n.num);
      case Node::Rhs::String: {
        const auto* s = std::get_if<std::string>(v);
        if (!s) return false;
        return n.op == CmpOp::Eq ? *s == n.str : *s != n.str;
      }
      case Node::Rhs::Var: {
        const Binding* b = lookup(n.str);
        if (!b || !b->bound) return false;
        if (n.op == CmpOp::Eq) return attr_value_eq(*v, b->value);
        if (n.op == CmpOp::Ne)
          return attr_is_numeric(*v) == attr_is_numeric(b->value) && !attr_value_eq(*v, b->value);
        if (!attr_is_numeric(*v) || !attr_is_numeric(b->value)) return false;
        return cmp_apply(n.op, attr_as_double(*v), attr_as_double(b->value));
      }
      case Node::Rhs::None:
        break;
    }
    return false;
  }

  /// Observed-value domain of a quantifier: `here` reads the anchor
  /// event, `obs` sweeps [first, last]. Values are deduplicated and
  /// ordered so expansion is deterministic.
  std::vector<AttrValue> domain(const Node& n, std::size_t anchor, std::size_t first,
                                std::size_t last) const {
    std::vector<AttrValue> values;
    auto admit = [&](const AttrValue& v) {
      if (n.sel.lo) {
        if (!attr_is_numeric(v)) return;
        double d = attr_as_double(v);
        if (d < *n.sel.lo || d > *n.sel.hi) return;
      }
      values.push_back(v);
    };
    if (n.sel.kind == DomainSel::Kind::Here) {
      if (const AttrValue* v = (*trace_)[anchor].attr(n.sel.attr)) admit(*v);
    } else {
      for (std::size_t i = first; i <= last; ++i)
        if (const AttrValue* v = (*trace_)[i].attr(n.sel.attr)) admit(*v);
    }
    std::sort(values.begin(), values.end(), attr_value_less);
    values.erase(std::unique(values.begin(), values.end(), attr_value_eq), values.end());
    return values;
  }

  // --- propositional ---

  bool ev_prop(const Formula& f, std::size_t idx) {
    ++count_;
    const Node& n = *f;
    const NodeInfo& ni = info(f.get());
    const std::uint64_t k = key(ni.id, idx, idx);
    if (ni.closed) {
      auto it = memo_.find(k);
      if (it != memo_.end()) return it->second;
    }
    bool r = false;
    const Event& e = (*trace_)[idx];
    switch (n.kind) {
      case NodeKind::Atom:
        r = n.name == "true" ? true : n.name == "false" ? false : e.has_prop(n.name);
        break;
      case NodeKind::AttrCmp: r = cmp_attr(n, e); break;
      case NodeKind::Not: r = !ev_prop(n.a, idx); break;
      case NodeKind::And: {
        bool x = ev_prop(n.a, idx);
        r = (x || exhaustive_) ? (ev_prop(n.b, idx) && x) : false;
        break;
      }
      case NodeKind::Or: {
        bool x = ev_prop(n.a, idx);
        r = (!x || exhaustive_) ? (ev_prop(n.b, idx) || x) : true;
        break;
      }
      case NodeKind::Implies: {
        bool x = ev_prop(n.a, idx);
        r = (x || exhaustive_) ? (ev_prop(n.b, idx) || !x) : true;
        break;
      }
      case NodeKind::ForAllAttr: {
        r = true;
        for (const AttrValue& v : domain(n, idx, idx, idx)) {
          env_.push_back(Binding{&n.name, true, v});
          bool one = ev_prop(n.a, idx);
          env_.pop_back();
          r = r && one;
          if (!r && !exhaustive_) break;
        }
        break;
      }
      case NodeKind::LetAttr: {
        const AttrValue* v = e.attr(n.attr);
        env_.push_back(Binding{&n.name, v != nullptr, v ? *v : AttrValue{}});
        r = ev_prop(n.a, idx);
        env_.pop_back();
        break;
      }
      default:
        throw FormulaError(std::string(connective_name(n.kind)) +
                           " cannot be evaluated propositionally");
    }
    if (ni.closed) memo_.emplace(k, r);
    return r;
  }

  // --- LTL over suffixes ---

  bool ev_ltl(const Formula& f, std::size_t pos) {
    ++count_;
    const Node& n = *f;
    const NodeInfo& ni = info(f.get());
    const std::uint64_t k = key(ni.id, pos, pos);
    if (ni.closed) {
      auto it = memo_.find(k);
      if (it != memo_.end()) return it->second;
    }
    const std::size_t len = trace_->size();
    const Event& e = (*trace_)[pos];
    bool r = false;
    switch (n.kind) {
      case NodeKind::Atom:
        r = n.name == "true" ? true : n.name == "false" ? false : e.has_prop(n.name);
        break;
      case NodeKind::AttrCmp: r = cmp_attr(n, e); break;
      case NodeKind::Not: r = !ev_ltl(n.a, pos); break;
      case NodeKind::And: {
        bool x = ev_ltl(n.a, pos);
        r = (x || exhaustive_) ? (ev_ltl(n.b, pos) && x) : false;
        break;
      }
      case NodeKind::Or: {
        bool x = ev_ltl(n.a, pos);
        r = (!x || exhaustive_) ? (ev_ltl(n.b, pos) || x) : true;
        break;
      }
      case NodeKind::Implies: {
        bool x = ev_ltl(n.a, pos);
        r = (x || exhaustive_) ? (ev_ltl(n.b, pos) || !x) : true;
        break;
      }
      case NodeKind::Next: r = pos + 1 < len && ev_ltl(n.a, pos + 1); break;
      case NodeKind::Until:
        if (exhaustive_) {
          for (std::size_t k = pos; k < len; ++k) {
            bool gk = ev_ltl(n.b, k);
            bool all = true;
            for (std::size_t j = pos; j < k; ++j) all = ev_ltl(n.a, j) && all;
            r = r || (gk && all);
          }
        } else {
          for (std::size_t i = pos; i < len; ++i) {
            if (ev_ltl(n.b, i)) { r = true; break; }
            if (!ev_ltl(n.a, i)) break;
          }
        }
        break;
      case NodeKind::Eventually:
        for (std::size_t i = pos; i < len; ++i) {
          r = ev_ltl(n.a, i) || r;
          if (r && !exhaustive_) break;
        }
        break;
      case NodeKind::Globally:
        r = true;
        for (std::size_t i = pos; i < len; ++i) {
          r = ev_ltl(n.a, i) && r;
          if (!r && !exhaustive_) break;
        }
        break;
      case NodeKind::ForAllAttr: {
        r = true;
        for (const AttrValue& v : domain(n, pos, pos, len - 1)) {
          env_.push_back(Binding{&n.name, true, v});
          bool one = ev_ltl(n.a, pos);
          env_.pop_back();
          r = r && one;
          if (!r && !exhaustive_) break;
        }
        break;
      }
      case NodeKind::LetAttr: {
        const AttrValue* v = e.attr(n.attr);
        env_.push_back(Binding{&n.name, v != nullptr, v ? *v : AttrValue{}});
        r = ev_ltl(n.a, pos);
        env_.pop_back();
        break;
      }
      default:
        throw FormulaError(std::string(connective_name(n.kind)) +
                           " cannot be evaluated at LTL");
    }
    if (ni.closed) memo_.emplace(k, r);
    return r;
  }

  // --- ITL / RASL over intervals ---

  bool ev_itl(const Formula& f, std::size_t lo, std::size_t hi) {
    ++count_;
    const Node& n = *f;
    const NodeInfo& ni = info(f.get());
    const std::uint64_t k = key(ni.id, lo, hi);
    if (ni.closed) {
      auto it = memo_.find(k);
      if (it != memo_.end()) return it->second;
    }
    const Event& e = (*trace_)[lo];
    bool r = false;
    switch (n.kind) {
      case NodeKind::Atom:
        r = n.name == "true" ? true : n.name == "false" ? false : e.has_prop(n.name);
        break;
      case NodeKind::AttrCmp: r = cmp_attr(n, e); break;
      case NodeKind::Not: r = !ev_itl(n.a, lo, hi); break;
      case NodeKind::And: {
        bool x = ev_itl(n.a, lo, hi);
        r = (x || exhaustive_) ? (ev_itl(n.b, lo, hi) && x) : false;
        break;
      }
      case NodeKind::Or: {
        bool x = ev_itl(n.a, lo, hi);
        r = (!x || exhaustive_) ? (ev_itl(n.b, lo, hi) || x) : true;
        break;
      }
      case NodeKind::Implies: {
        bool x = ev_itl(n.a, lo, hi);
        r = (x || exhaustive_) ? (ev_itl(n.b, lo, hi) || !x) : true;
        break;
      }
      case NodeKind::Next: r = lo < hi && ev_itl(n.a, lo + 1, hi); break;
      case NodeKind::Until:
        if (exhaustive_) {
          for (std::size_t k = lo; k <= hi; ++k) {
            bool gk = ev_itl(n.b, k, hi);
            bool all = true;
            for (std::size_t j = lo; j < k; ++j) all = ev_itl(n.a, j, hi) && all;
            r = r || (gk && all);
          }
        } else {
          for (std::size_t i = lo; i <= hi; ++i) {
            if (ev_itl(n.b, i, hi)) { r = true; break; }
            if (!ev_itl(n.a, i, hi)) break;
          }
        }
        break;
      case NodeKind::Eventually:
        for (std::size_t i = lo; i <= hi; ++i) {
          r = ev_itl(n.a, i, hi) || r;
          if (r && !exhaustive_) break;
        }
        break;
      case NodeKind::Globally:
        r = true;
        for (std::size_t i = lo; i <= hi; ++i) {
          r = ev_itl(n.a, i, hi) && r;
          if (!r && !exhaustive_) break;
        }
        break;
      case NodeKind::Chop:
        for (std::size_t m = lo; m <= hi; ++m) {
          bool x = ev_itl(n.a, lo, m);
          if (x || exhaustive_) r = (ev_itl(n.b, m, hi) && x) || r;
          if (r && !exhaustive_) break;
        }
        break;
      case NodeKind::ChopStar:
        // Zero chunks only on a point. Point chunks never advance the
        // fusion point, so they are redundant and skipped.
        if (lo == hi) r = true;
        else
          for (std::size_t m = lo + 1; m <= hi; ++m) {
            bool x = ev_itl(n.a, lo, m);
            if (x || exhaustive_) r = (ev_itl(f, m, hi) && x) || r;
            if (r && !exhaustive_) break;
          }
        break;
      case NodeKind::Parallel: {
        auto holds_on_prefix = [&](const Formula& g) {
          bool any = false;
          for (std::size_t m = lo; m <= hi; ++m) {
            any = ev_itl(g, lo, m) || any;
            if (any && !exhaustive_) break;
          }
          return any;
        };
        bool x = ev_itl(n.a, lo, hi);
        if (x || exhaustive_) r = holds_on_prefix(n.b) && x;
        if (!r || exhaustive_) {
          bool y = ev_itl(n.b, lo, hi);
          if (y || exhaustive_) r = (holds_on_prefix(n.a) && y) || r;
        }
        break;
      }
      case NodeKind::Skip: r = lo + 1 == hi; break;
      case NodeKind::ElapsedCmp:
        r = cmp_apply(n.op, (*trace_)[hi].t - (*trace_)[lo].t, n.num);
        break;
      case NodeKind::TimedChop:
        for (std::size_t m = lo; m <= hi; ++m) {
          bool x = ev_itl(n.a, lo, m);
          if (!x && !exhaustive_) continue;
          const double d = (*trace_)[m].t - (*trace_)[lo].t;
          bool ok = true;
          for (const TimeBound& tb : n.bounds) ok = ok && cmp_apply(tb.op, d, tb.value);
          if (ok || exhaustive_) r = (ev_itl(n.b, m, hi) && ok && x) || r;
          if (r && !exhaustive_) break;
        }
        break;
      case NodeKind::ForAllAttr: {
        r = true;
        for (const AttrValue& v : domain(n, lo, lo, hi)) {
          env_.push_back(Binding{&n.name, true, v});
          bool one = ev_itl(n.a, lo, hi);
          env_.pop_back();
          r = r && one;
          if (!r && !exhaustive_) break;
        }
        break;
      }
      case NodeKind::LetAttr: {
        const AttrValue* v = e.attr(n.attr);
        env_.push_back(Binding{&n.name, v != nullptr, v ? *v : AttrValue{}});
        r = ev_itl(n.a, lo, hi);
        env_.pop_back();
        break;
      }
    }
    if (ni.closed) memo_.emplace(k, r);
    return r;
  }

  const Trace* trace_;
  Logic logic_;
  Formula root_;
  bool exhaustive_ = false;
  std::unordered_map<const Node*, NodeInfo> info_;
  std::uint32_t next_id_ = 0;
  std::unordered_map<std::uint64_t, bool> memo_;
  std::vector<Binding> env_;
  std::uint64_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Spec-level entry points. Each owns a private memo table, so concurrent
// evaluations over shared immutable traces are safe and results do not
// depend on scheduling.
// ---------------------------------------------------------------------------

inline bool eval_prop(const Formula& f, const Event& e) {
  Trace one({e});
  Evaluator ev(one, Logic::Prop, f);
  return ev.at_event(0);
}

inline bool eval_ltl(const Formula& f, const Trace& tr, std::size_t pos) {
  Evaluator ev(tr, Logic::LTL, f);
  return ev.at_position(pos);
}

inline bool eval_itl(const Formula& f, const Interval& iv) {
  Evaluator ev(*iv.trace, Logic::ITL, f);
  return ev.on_window(iv.lo, iv.hi);
}

inline bool eval_rasl(const Formula& f, const Interval& iv) {
  Evaluator ev(*iv.trace, Logic::RASL, f);
  return ev.on_window(iv.lo, iv.hi);
}

/// Scope of one evaluation: an event index (Prop), a suffix position
/// (LTL), or an interval (ITL/RASL).
struct Scope {
  enum class Kind { EventIdx, Position, Window } kind = Kind::Position;
  std::size_t lo = 0;
  std::size_t hi = 0;

  static Scope event(std::size_t i) { return {Kind::EventIdx, i, i}; }
  static Scope position(std::size_t p) { return {Kind::Position, p, p}; }
  static Scope window(std::size_t lo, std::size_t hi) { return {Kind::Window, lo, hi}; }
};

inline EvalStats eval_stats(const Formula& f, Logic logic, const Trace& tr, Scope scope) {
  Evaluator ev(tr, logic, f);
  EvalStats st;
  switch (scope.kind) {
    case Scope::Kind::EventIdx: st.result = ev.at_event(scope.lo); break;
    case Scope::Kind::Position: st.result = ev.at_position(scope.lo); break;
    case Scope::Kind::Window: st.result = ev.on_window(scope.lo, scope.hi); break;
  }
  st.eval_count = ev.eval_count();
  st.memo_entries = ev.memo_entries();
  return st;
}

}  // namespace tlids
