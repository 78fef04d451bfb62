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

#include <stdexcept>
#include <string>
#include <vector>

#include "tlids/formula.hpp"

namespace tlids {

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* logic_display(Logic l) {
  switch (l) {
    case Logic::Prop: return "Prop";
    case Logic::LTL: return "LTL";
    case Logic::ITL: return "ITL";
    case Logic::RASL: return "RASL";
  }
  return "?";
}

/// Human name of a connective as used in diagnostics.
inline const char* connective_name(NodeKind k) {
  switch (k) {
    case NodeKind::Atom: return "atom";
    case NodeKind::AttrCmp: return "attribute comparison";
    case NodeKind::ForAllAttr: return "forall";
    case NodeKind::LetAttr: return "let";
    case NodeKind::Not: return "negation";
    case NodeKind::And: return "conjunction";
    case NodeKind::Or: return "disjunction";
    case NodeKind::Implies: return "implication";
    case NodeKind::Next: return "next";
    case NodeKind::Until: return "until";
    case NodeKind::Eventually: return "eventually";
    case NodeKind::Globally: return "globally";
    case NodeKind::Chop: return "chop";
    case NodeKind::ChopStar: return "chop-star";
    case NodeKind::Parallel: return "parallel";
    case NodeKind::Skip: return "skip";
    case NodeKind::TimedChop: return "timed chop";
    case NodeKind::ElapsedCmp: return "timed constraint";
  }
  return "?";
}

/// Weakest logic at which a node kind is legal. `obs` quantifier domains
/// observe the whole scope and so require LTL.
inline Logic min_logic(const Node& n) {
  switch (n.kind) {
    case NodeKind::Atom:
    case NodeKind::AttrCmp:
    case NodeKind::Not:
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::LetAttr:
      return Logic::Prop;
    case NodeKind::ForAllAttr:
      return n.sel.kind == DomainSel::Kind::Obs ? Logic::LTL : Logic::Prop;
    case NodeKind::Next:
    case NodeKind::Until:
    case NodeKind::Eventually:
    case NodeKind::Globally:
      return Logic::LTL;
    case NodeKind::Chop:
    case NodeKind::ChopStar:
    case NodeKind::Parallel:
      return Logic::ITL;
    case NodeKind::Skip:
    case NodeKind::TimedChop:
    case NodeKind::ElapsedCmp:
      return Logic::RASL;
  }
  return Logic::RASL;
}

struct Violation {
  NodeKind kind;
  Logic required;
  Logic requested;

  std::string message() const {
    std::string m = connective_name(kind);
    m += " not in ";
    m += logic_display(requested);
    m += " (requires ";
    m += logic_display(required);
    m += ")";
    return m;
  }
};

namespace detail {
inline void collect_violations(const Formula& f, Logic logic, std::vector<Violation>& out) {
  if (!f) return;
  Logic need = min_logic(*f);
  if (static_cast<int>(need) > static_cast<int>(logic))
    out.push_back(Violation{f->kind, need, logic});
  collect_violations(f->a, logic, out);
  collect_violations(f->b, logic, out);
}
}  // namespace detail

/// Empty result means the formula is valid at `logic`. Violations are
/// returned as data, one per offending node, in pre-order.
inline std::vector<Violation> validate_for_logic(const Formula& f, Logic logic) {
  std::vector<Violation> out;
  detail::collect_violations(f, logic, out);
  return out;
}

inline bool valid_for(const Formula& f, Logic logic) {
  return validate_for_logic(f, logic).empty();
}

/// Weakest logic the whole formula is valid at.
inline Logic required_logic(const Formula& f) {
  Logic need = min_logic(*f);
  if (f->a) {
    Logic a = required_logic(f->a);
    if (static_cast<int>(a) > static_cast<int>(need)) need = a;
  }
  if (f->b) {
    Logic b = required_logic(f->b);
    if (static_cast<int>(b) > static_cast<int>(need)) need = b;
  }
  return need;
}

/// True when the formula contains any temporal connective; the detector
/// widens its scan windows to two or more events for these (the chop-star
/// point-interval vacuity guard).
inline bool contains_temporal(const Formula& f) {
  if (!f) return false;
  switch (f->kind) {
    case NodeKind::Next:
    case NodeKind::Until:
    case NodeKind::Eventually:
    case NodeKind::Globally:
    case NodeKind::Chop:
    case NodeKind::ChopStar:
    case NodeKind::Parallel:
    case NodeKind::Skip:
    case NodeKind::TimedChop:
    case NodeKind::ElapsedCmp:
      return true;
    default:
      return contains_temporal(f->a) || contains_temporal(f->b);
  }
}

}  // namespace tlids
