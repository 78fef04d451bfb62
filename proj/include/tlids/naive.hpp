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

#include <map>
#include <string>

#include "tlids/eval.hpp"
#include "tlids/formula.hpp"
#include "tlids/trace.hpp"
#include "tlids/validate.hpp"

namespace tlids {

// ---------------------------------------------------------------------------
// Reference oracle: direct recursion over the semantics with exhaustive
// enumeration of fusion points and partitions, no memo table, no node
// indexing. Everything else in the project is checked against this.
// The generator's record verification also uses only this path.
// ---------------------------------------------------------------------------

namespace naive_detail {

struct Env {
  std::map<std::string, AttrValue> bound;
  std::map<std::string, bool> present;

  void push(const std::string& name, const AttrValue* v) {
    present[name] = v != nullptr;
    if (v) bound[name] = *v;
  }
};

inline bool cmp_attr(const Node& n, const Event& e, const Env& env) {
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
      auto p = env.present.find(n.str);
      if (p == env.present.end() || !p->second) return false;
      const AttrValue& b = env.bound.at(n.str);
      if (n.op == CmpOp::Eq) return attr_value_eq(*v, b);
      if (n.op == CmpOp::Ne)
        return attr_is_numeric(*v) == attr_is_numeric(b) && !attr_value_eq(*v, b);
      if (!attr_is_numeric(*v) || !attr_is_numeric(b)) return false;
      return cmp_apply(n.op, attr_as_double(*v), attr_as_double(b));
    }
    case Node::Rhs::None:
      break;
  }
  return false;
}

inline std::vector<AttrValue> domain(const Node& n, const Trace& tr, std::size_t anchor,
                                     std::size_t first, std::size_t last) {
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
    if (const AttrValue* v = tr[anchor].attr(n.sel.attr)) admit(*v);
  } else {
    for (std::size_t i = first; i <= last; ++i)
      if (const AttrValue* v = tr[i].attr(n.sel.attr)) admit(*v);
  }
  std::sort(values.begin(), values.end(), attr_value_less);
  values.erase(std::unique(values.begin(), values.end(), attr_value_eq), values.end());
  return values;
}

inline bool ev_prop(const Formula& f, const Trace& tr, std::size_t idx, Env& env);
inline bool ev_ltl(const Formula& f, const Trace& tr, std::size_t pos, Env& env);
inline bool ev_itl(const Formula& f, const Trace& tr, std::size_t lo, std::size_t hi, Env& env);

inline bool ev_prop(const Formula& f, const Trace& tr, std::size_t idx, Env& env) {
  const Node& n = *f;
  const Event& e = tr[idx];
  switch (n.kind) {
    case NodeKind::Atom:
      return n.name == "true" ? true : n.name == "false" ? false : e.has_prop(n.name);
    case NodeKind::AttrCmp: return cmp_attr(n, e, env);
    case NodeKind::Not: return !ev_prop(n.a, tr, idx, env);
    case NodeKind::And: return ev_prop(n.a, tr, idx, env) && ev_prop(n.b, tr, idx, env);
    case NodeKind::Or: return ev_prop(n.a, tr, idx, env) || ev_prop(n.b, tr, idx, env);
    case NodeKind::Implies: return !ev_prop(n.a, tr, idx, env) || ev_prop(n.b, tr, idx, env);
    case NodeKind::ForAllAttr: {
      for (const AttrValue& v : domain(n, tr, idx, idx, idx)) {
        Env inner = env;
        inner.push(n.name, &v);
        if (!ev_prop(n.a, tr, idx, inner)) return false;
      }
      return true;
    }
    case NodeKind::LetAttr: {
      Env inner = env;
      inner.push(n.name, e.attr(n.attr));
      return ev_prop(n.a, tr, idx, inner);
    }
    default:
      throw FormulaError(std::string(connective_name(n.kind)) +
                         " cannot be evaluated propositionally");
  }
}

inline bool ev_ltl(const Formula& f, const Trace& tr, std::size_t pos, Env& env) {
  const Node& n = *f;
  const std::size_t len = tr.size();
  const Event& e = tr[pos];
  switch (n.kind) {
    case NodeKind::Atom:
      return n.name == "true" ? true : n.name == "false" ? false : e.has_prop(n.name);
    case NodeKind::AttrCmp: return cmp_attr(n, e, env);
    case NodeKind::Not: return !ev_ltl(n.a, tr, pos, env);
    case NodeKind::And: return ev_ltl(n.a, tr, pos, env) && ev_ltl(n.b, tr, pos, env);
    case NodeKind::Or: return ev_ltl(n.a, tr, pos, env) || ev_ltl(n.b, tr, pos, env);
    case NodeKind::Implies: return !ev_ltl(n.a, tr, pos, env) || ev_ltl(n.b, tr, pos, env);
    case NodeKind::Next: return pos + 1 < len && ev_ltl(n.a, tr, pos + 1, env);
    case NodeKind::Until:
      // exists k >= pos with b at k and a at every j in [pos, k)
      for (std::size_t k = pos; k < len; ++k) {
        if (ev_ltl(n.b, tr, k, env)) {
          bool all = true;
          for (std::size_t j = pos; j < k && all; ++j) all = ev_ltl(n.a, tr, j, env);
          if (all) return true;
        }
      }
      return false;
    case NodeKind::Eventually:
      for (std::size_t k = pos; k < len; ++k)
        if (ev_ltl(n.a, tr, k, env)) return true;
      return false;
    case NodeKind::Globally:
      for (std::size_t k = pos; k < len; ++k)
        if (!ev_ltl(n.a, tr, k, env)) return false;
      return true;
    case NodeKind::ForAllAttr: {
      for (const AttrValue& v : domain(n, tr, pos, pos, len - 1)) {
        Env inner = env;
        inner.push(n.name, &v);
        if (!ev_ltl(n.a, tr, pos, inner)) return false;
      }
      return true;
    }
    case NodeKind::LetAttr: {
      Env inner = env;
      inner.push(n.name, e.attr(n.attr));
      return ev_ltl(n.a, tr, pos, inner);
    }
    default:
      throw FormulaError(std::string(connective_name(n.kind)) +
                         " cannot be evaluated at LTL");
  }
}

inline bool ev_itl(const Formula& f, const Trace& tr, std::size_t lo, std::size_t hi,
                   Env& env) {
  const Node& n = *f;
  const Event& e = tr[lo];
  switch (n.kind) {
    case NodeKind::Atom:
      return n.name == "true" ? true : n.name == "false" ? false : e.has_prop(n.name);
    case NodeKind::AttrCmp: return cmp_attr(n, e, env);
    case NodeKind::Not: return !ev_itl(n.a, tr, lo, hi, env);
    case NodeKind::And: return ev_itl(n.a, tr, lo, hi, env) && ev_itl(n.b, tr, lo, hi, env);
    case NodeKind::Or: return ev_itl(n.a, tr, lo, hi, env) || ev_itl(n.b, tr, lo, hi, env);
    case NodeKind::Implies:
      return !ev_itl(n.a, tr, lo, hi, env) || ev_itl(n.b, tr, lo, hi, env);
    case NodeKind::Next: return lo < hi && ev_itl(n.a, tr, lo + 1, hi, env);
    case NodeKind::Until:
      for (std::size_t k = lo; k <= hi; ++k) {
        if (ev_itl(n.b, tr, k, hi, env)) {
          bool all = true;
          for (std::size_t j = lo; j < k && all; ++j) all = ev_itl(n.a, tr, j, hi, env);
          if (all) return true;
        }
      }
      return false;
    case NodeKind::Eventually:
      for (std::size_t k = lo; k <= hi; ++k)
        if (ev_itl(n.a, tr, k, hi, env)) return true;
      return false;
    case NodeKind::Globally:
      for (std::size_t k = lo; k <= hi; ++k)
        if (!ev_itl(n.a, tr, k, hi, env)) return false;
      return true;
    case NodeKind::Chop:
      // exists fusion point m shared by both chunks
      for (std::size_t m = lo; m <= hi; ++m)
        if (ev_itl(n.a, tr, lo, m, env) && ev_itl(n.b, tr, m, hi, env)) return true;
      return false;
    case NodeKind::ChopStar:
      if (lo == hi) return true;
      for (std::size_t m = lo + 1; m <= hi; ++m)
        if (ev_itl(n.a, tr, lo, m, env) && ev_itl(f, tr, m, hi, env)) return true;
      return false;
    case NodeKind::Parallel: {
      auto prefix = [&](const Formula& g) {
        for (std::size_t m = lo; m <= hi; ++m)
          if (ev_itl(g, tr, lo, m, env)) return true;
        return false;
      };
      return (ev_itl(n.a, tr, lo, hi, env) && prefix(n.b)) ||
             (ev_itl(n.b, tr, lo, hi, env) && prefix(n.a));
    }
    case NodeKind::Skip: return lo + 1 == hi;
    case NodeKind::ElapsedCmp: return cmp_apply(n.op, tr[hi].t - tr[lo].t, n.num);
    case NodeKind::TimedChop:
      for (std::size_t m = lo; m <= hi; ++m) {
        if (!ev_itl(n.a, tr, lo, m, env)) continue;
        const double d = tr[m].t - tr[lo].t;
        bool ok = true;
        for (const TimeBound& tb : n.bounds)
          if (!cmp_apply(tb.op, d, tb.value)) { ok = false; break; }
        if (ok && ev_itl(n.b, tr, m, hi, env)) return true;
      }
      return false;
    case NodeKind::ForAllAttr: {
      for (const AttrValue& v : domain(n, tr, lo, lo, hi)) {
        Env inner = env;
        inner.push(n.name, &v);
        if (!ev_itl(n.a, tr, lo, hi, inner)) return false;
      }
      return true;
    }
    case NodeKind::LetAttr: {
      Env inner = env;
      inner.push(n.name, e.attr(n.attr));
      return ev_itl(n.a, tr, lo, hi, inner);
    }
  }
  return false;
}

}  // namespace naive_detail

inline bool naive_prop(const Formula& f, const Trace& tr, std::size_t idx) {
  naive_detail::Env env;
  return naive_detail::ev_prop(f, tr, idx, env);
}

inline bool naive_prop(const Formula& f, const Event& e) {
  Trace one({e});
  return naive_prop(f, one, 0);
}

inline bool naive_ltl(const Formula& f, const Trace& tr, std::size_t pos) {
  naive_detail::Env env;
  return naive_detail::ev_ltl(f, tr, pos, env);
}

inline bool naive_itl(const Formula& f, const Interval& iv) {
  naive_detail::Env env;
  return naive_detail::ev_itl(f, *iv.trace, iv.lo, iv.hi, env);
}

inline bool naive_rasl(const Formula& f, const Interval& iv) { return naive_itl(f, iv); }

/// Ground-truth evaluation of any valid formula at any scope.
inline bool eval_naive(const Formula& f, Logic logic, const Trace& tr, Scope scope) {
  (void)logic;
  switch (scope.kind) {
    case Scope::Kind::EventIdx: return naive_prop(f, tr, scope.lo);
    case Scope::Kind::Position: return naive_ltl(f, tr, scope.lo);
    case Scope::Kind::Window: return naive_itl(f, subinterval(tr, scope.lo, scope.hi));
  }
  return false;
}

}  // namespace tlids
