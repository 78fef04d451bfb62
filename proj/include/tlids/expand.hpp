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

#include "tlids/formula.hpp"
#include "tlids/validate.hpp"

namespace tlids {

// ---------------------------------------------------------------------------
// Derived-operator expansion to core form.
//
//   core(Prop) = {atom, cmp, !, |}            (+ binders)
//   core(LTL)  = core(Prop) + {X, U}
//   core(ITL)  = core(LTL)  + {; , *}
//   core(RASL) = core(ITL)  + {skip, Tf} - {X}
//
// Rewrites:
//   a & b   =  !(!a | !b)
//   a -> b  =  !a | b
//   <>a     =  true U a          (LTL)       true ; a        (ITL, RASL)
//   []a     =  !<>!a
//   a || b  =  a & (b;true) | b & (a;true)   (ITL, RASL)
//   X a     =  skip ; a          (RASL only; X stays core at LTL/ITL)
//   a ;[d] b = (a & d) ; b       (RASL)
//
// Expansion is idempotent and, by the oracle tests, semantics-preserving.
// ---------------------------------------------------------------------------

namespace detail {

inline Formula core_not(Formula f) { return f_not(std::move(f)); }
inline Formula core_or(Formula a, Formula b) { return f_or(std::move(a), std::move(b)); }
inline Formula core_and(Formula a, Formula b) {
  return f_not(f_or(f_not(std::move(a)), f_not(std::move(b))));
}

inline Formula expand(const Formula& f, Logic logic) {
  const bool interval = logic >= Logic::ITL;
  const bool rasl = logic == Logic::RASL;
  auto ea = f->a ? expand(f->a, logic) : nullptr;
  auto eb = f->b ? expand(f->b, logic) : nullptr;
  switch (f->kind) {
    case NodeKind::Atom:
    case NodeKind::AttrCmp:
    case NodeKind::ElapsedCmp:
    case NodeKind::Skip:
      return f;
    case NodeKind::ForAllAttr:
      return f_forall(f->name, f->sel, std::move(ea));
    case NodeKind::LetAttr:
      return f_let(f->name, f->attr, std::move(ea));
    case NodeKind::Not:
      return core_not(std::move(ea));
    case NodeKind::Or:
      return core_or(std::move(ea), std::move(eb));
    case NodeKind::And:
      return core_and(std::move(ea), std::move(eb));
    case NodeKind::Implies:
      return core_or(core_not(std::move(ea)), std::move(eb));
    case NodeKind::Next:
      if (rasl) return f_chop(f_skip(), std::move(ea));
      return f_next(std::move(ea));
    case NodeKind::Until:
      return f_until(std::move(ea), std::move(eb));
    case NodeKind::Eventually:
      if (interval) return f_chop(f_true(), std::move(ea));
      return f_until(f_true(), std::move(ea));
    case NodeKind::Globally:
      if (interval) return core_not(f_chop(f_true(), core_not(std::move(ea))));
      return core_not(f_until(f_true(), core_not(std::move(ea))));
    case NodeKind::Chop:
      return f_chop(std::move(ea), std::move(eb));
    case NodeKind::ChopStar:
      return f_chop_star(std::move(ea));
    case NodeKind::Parallel:
      return core_or(core_and(ea, f_chop(eb, f_true())),
                     core_and(eb, f_chop(ea, f_true())));
    case NodeKind::TimedChop: {
      Formula delta = nullptr;
      for (const TimeBound& tb : f->bounds) {
        Formula one = f_elapsed(tb.op, tb.value);
        delta = delta ? core_and(std::move(delta), std::move(one)) : std::move(one);
      }
      Formula head = delta ? core_and(std::move(ea), std::move(delta)) : std::move(ea);
      return f_chop(std::move(head), std::move(eb));
    }
  }
  return f;
}

}  // namespace detail

/// Expand every derived operator of `f` to the core form of `logic`.
/// Precondition: f validates at `logic`.
inline Formula expand_derived(const Formula& f, Logic logic) {
  return detail::expand(f, logic);
}

/// True when the formula is already in core form for `logic`.
inline bool is_core_form(const Formula& f, Logic logic) {
  if (!f) return true;
  switch (f->kind) {
    case NodeKind::And:
    case NodeKind::Implies:
    case NodeKind::Eventually:
    case NodeKind::Globally:
    case NodeKind::Parallel:
    case NodeKind::TimedChop:
      return false;
    case NodeKind::Next:
      if (logic == Logic::RASL) return false;
      break;
    default:
      break;
  }
  return is_core_form(f->a, logic) && is_core_form(f->b, logic);
}

}  // namespace tlids
