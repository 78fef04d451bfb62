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

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tlids {

/// The four logics, totally ordered by expressive power.
enum class Logic { Prop = 0, LTL = 1, ITL = 2, RASL = 3 };

inline const char* logic_name(Logic l) {
  switch (l) {
    case Logic::Prop: return "prop";
    case Logic::LTL: return "ltl";
    case Logic::ITL: return "itl";
    case Logic::RASL: return "rasl";
  }
  return "?";
}

inline std::optional<Logic> logic_from_name(const std::string& s) {
  if (s == "prop") return Logic::Prop;
  if (s == "ltl") return Logic::LTL;
  if (s == "itl") return Logic::ITL;
  if (s == "rasl") return Logic::RASL;
  return std::nullopt;
}

enum class NodeKind {
  Atom,        // proposition, or the constants true/false
  AttrCmp,     // attribute <op> (number | string | bound variable)
  ForAllAttr,  // forall v in here(a)/obs(a[,lo,hi]): body
  LetAttr,     // let v := attr in body   (bound at the anchor event)
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Globally,
  Chop,
  ChopStar,
  Parallel,
  Skip,
  TimedChop,   // a ;[x<c ...] b
  ElapsedCmp,  // Tf <op> c
};

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

inline const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

inline bool cmp_apply(CmpOp op, double a, double b) {
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
  }
  return false;
}

/// Quantifier domain: the values of one attribute, either at the event the
/// formula's atoms currently read (`here`) or across the whole evaluation
/// scope (`obs`, optionally filtered to a closed numeric range). `obs` is
/// a scope-wide observation and therefore requires LTL or above.
struct DomainSel {
  enum class Kind { Here, Obs } kind = Kind::Here;
  std::string attr;
  std::optional<double> lo, hi;  // range filter, only with Obs

  friend bool operator==(const DomainSel& a, const DomainSel& b) {
    return a.kind == b.kind && a.attr == b.attr && a.lo == b.lo && a.hi == b.hi;
  }
};

/// One conjunct of a timed-chop constraint: elapsed-time <op> value.
struct TimeBound {
  CmpOp op = CmpOp::Lt;
  double value = 0.0;

  friend bool operator==(const TimeBound& a, const TimeBound& b) {
    return a.op == b.op && a.value == b.value;
  }
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  Formula a, b;  // children (a only for unary)

  // Atom: name. AttrCmp: name = attribute. Binders: name = bound variable.
  std::string name;

  // AttrCmp right-hand side.
  enum class Rhs { None, Number, String, Var } rhs = Rhs::None;
  double num = 0.0;     // AttrCmp number / ElapsedCmp bound
  std::string str;      // AttrCmp string constant or referenced variable
  CmpOp op = CmpOp::Eq; // AttrCmp / ElapsedCmp

  std::string attr;             // LetAttr source attribute
  DomainSel sel;                // ForAllAttr
  std::vector<TimeBound> bounds;  // TimedChop
};

namespace detail {
inline Formula mk(NodeKind k, Formula a = nullptr, Formula b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
}  // namespace detail

inline Formula f_atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Atom;
  n->name = std::move(name);
  return n;
}
inline Formula f_true() { return f_atom("true"); }
inline Formula f_false() { return f_atom("false"); }

inline Formula f_attr_cmp(std::string attr, CmpOp op, double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::AttrCmp;
  n->name = std::move(attr);
  n->op = op;
  n->rhs = Node::Rhs::Number;
  n->num = value;
  return n;
}
inline Formula f_attr_cmp_str(std::string attr, CmpOp op, std::string value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::AttrCmp;
  n->name = std::move(attr);
  n->op = op;
  n->rhs = Node::Rhs::String;
  n->str = std::move(value);
  return n;
}
inline Formula f_attr_cmp_var(std::string attr, CmpOp op, std::string var) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::AttrCmp;
  n->name = std::move(attr);
  n->op = op;
  n->rhs = Node::Rhs::Var;
  n->str = std::move(var);
  return n;
}

inline Formula f_forall(std::string var, DomainSel sel, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::ForAllAttr;
  n->name = std::move(var);
  n->sel = std::move(sel);
  n->a = std::move(body);
  return n;
}
inline Formula f_let(std::string var, std::string attr, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::LetAttr;
  n->name = std::move(var);
  n->attr = std::move(attr);
  n->a = std::move(body);
  return n;
}

inline Formula f_not(Formula f) { return detail::mk(NodeKind::Not, std::move(f)); }
inline Formula f_and(Formula a, Formula b) {
  return detail::mk(NodeKind::And, std::move(a), std::move(b));
}
inline Formula f_or(Formula a, Formula b) {
  return detail::mk(NodeKind::Or, std::move(a), std::move(b));
}
inline Formula f_implies(Formula a, Formula b) {
  return detail::mk(NodeKind::Implies, std::move(a), std::move(b));
}
inline Formula f_next(Formula f) { return detail::mk(NodeKind::Next, std::move(f)); }
inline Formula f_until(Formula a, Formula b) {
  return detail::mk(NodeKind::Until, std::move(a), std::move(b));
}
inline Formula f_eventually(Formula f) {
  return detail::mk(NodeKind::Eventually, std::move(f));
}
inline Formula f_globally(Formula f) {
  return detail::mk(NodeKind::Globally, std::move(f));
}
inline Formula f_chop(Formula a, Formula b) {
  return detail::mk(NodeKind::Chop, std::move(a), std::move(b));
}
inline Formula f_chop_star(Formula f) {
  return detail::mk(NodeKind::ChopStar, std::move(f));
}
inline Formula f_parallel(Formula a, Formula b) {
  return detail::mk(NodeKind::Parallel, std::move(a), std::move(b));
}
inline Formula f_skip() { return detail::mk(NodeKind::Skip); }
inline Formula f_timed_chop(Formula a, std::vector<TimeBound> bounds, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::TimedChop;
  n->a = std::move(a);
  n->b = std::move(b);
  n->bounds = std::move(bounds);
  return n;
}
inline Formula f_elapsed(CmpOp op, double c) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::ElapsedCmp;
  n->op = op;
  n->num = c;
  return n;
}

inline bool is_const_true(const Formula& f) {
  return f->kind == NodeKind::Atom && f->name == "true";
}
inline bool is_const_false(const Formula& f) {
  return f->kind == NodeKind::Atom && f->name == "false";
}

/// Structural equality.
inline bool equals(const Formula& x, const Formula& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case NodeKind::Atom:
      return x->name == y->name;
    case NodeKind::AttrCmp:
      if (x->name != y->name || x->op != y->op || x->rhs != y->rhs) return false;
      if (x->rhs == Node::Rhs::Number) return x->num == y->num;
      return x->str == y->str;
    case NodeKind::ForAllAttr:
      return x->name == y->name && x->sel == y->sel && equals(x->a, y->a);
    case NodeKind::LetAttr:
      return x->name == y->name && x->attr == y->attr && equals(x->a, y->a);
    case NodeKind::ElapsedCmp:
      return x->op == y->op && x->num == y->num;
    case NodeKind::Skip:
      return true;
    case NodeKind::TimedChop:
      return x->bounds == y->bounds && equals(x->a, y->a) && equals(x->b, y->b);
    default:
      return equals(x->a, y->a) && (x->b == nullptr) == (y->b == nullptr) &&
             (x->b ? equals(x->b, y->b) : true);
  }
}

/// Count of nodes; the AST is a finite tree by construction.
inline std::size_t node_count(const Formula& f) {
  if (!f) return 0;
  return 1 + node_count(f->a) + node_count(f->b);
}

/// Shortest decimal text that round-trips the double.
inline std::string format_number(double v) {
  if (v == static_cast<long long>(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = std::strtod(buf, nullptr);
    if (back == v) return buf;
  }
  return "0";
}

// ---------------------------------------------------------------------------
// Printing. Binding strength, loosest first:
//   ->   |   ||   ;  ;[..]   &   U   unary (! X <> [] forall let)   postfix *
// '->', 'U', ';' associate to the right; the chains built for '|', '&'
// associate to the left. Binder bodies extend to the end of the current
// bracket, so binders are parenthesized whenever they appear as operands.
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Implies: return 1;
    case NodeKind::Or: return 2;
    case NodeKind::Parallel: return 3;
    case NodeKind::Chop:
    case NodeKind::TimedChop: return 4;
    case NodeKind::And: return 5;
    case NodeKind::Until: return 6;
    case NodeKind::Not:
    case NodeKind::Next:
    case NodeKind::Eventually:
    case NodeKind::Globally: return 7;
    case NodeKind::ChopStar: return 8;
    default: return 9;  // atoms, comparisons, skip, parenthesized binders
  }
}

inline void print(std::ostream& os, const Formula& f, int parent_prec, bool right_operand);

inline void print_binary(std::ostream& os, const Formula& f, const char* opname) {
  const int prec = precedence(f->kind);
  print(os, f->a, prec, false);
  os << ' ' << opname << ' ';
  print(os, f->b, prec, true);
}

inline void print(std::ostream& os, const Formula& f, int parent_prec, bool right_operand) {
  const int prec = precedence(f->kind);
  // Right-assoc operators may print an equal-precedence right child bare.
  const bool rassoc = f->kind == NodeKind::Implies || f->kind == NodeKind::Chop ||
                      f->kind == NodeKind::TimedChop || f->kind == NodeKind::Until;
  const bool lassoc_chain = f->kind == NodeKind::Or || f->kind == NodeKind::And ||
                            f->kind == NodeKind::Parallel;
  bool need_parens = prec < parent_prec;
  if (prec == parent_prec) {
    if (rassoc) need_parens = !right_operand;
    else if (lassoc_chain) need_parens = right_operand;
  }
  const bool binder = f->kind == NodeKind::ForAllAttr || f->kind == NodeKind::LetAttr;
  if (binder && parent_prec > 0) need_parens = true;
  if (need_parens) os << '(';
  switch (f->kind) {
    case NodeKind::Atom:
      os << f->name;
      break;
    case NodeKind::AttrCmp:
      os << f->name << ' ' << cmp_op_text(f->op) << ' ';
      if (f->rhs == Node::Rhs::Number) os << format_number(f->num);
      else if (f->rhs == Node::Rhs::String) os << '"' << f->str << '"';
      else os << f->str;
      break;
    case NodeKind::ElapsedCmp:
      os << "Tf " << cmp_op_text(f->op) << ' ' << format_number(f->num);
      break;
    case NodeKind::Skip:
      os << "skip";
      break;
    case NodeKind::Not:
      os << '!';
      print(os, f->a, precedence(NodeKind::Not), true);
      break;
    case NodeKind::Next:
      os << "X ";
      print(os, f->a, precedence(NodeKind::Next), true);
      break;
    case NodeKind::Eventually:
      os << "<> ";
      print(os, f->a, precedence(NodeKind::Eventually), true);
      break;
    case NodeKind::Globally:
      os << "[] ";
      print(os, f->a, precedence(NodeKind::Globally), true);
      break;
    case NodeKind::ChopStar:
      print(os, f->a, precedence(NodeKind::ChopStar) + 1, false);
      os << '*';
      break;
    case NodeKind::And:
      print_binary(os, f, "&");
      break;
    case NodeKind::Or:
      print_binary(os, f, "|");
      break;
    case NodeKind::Parallel:
      print_binary(os, f, "||");
      break;
    case NodeKind::Implies:
      print_binary(os, f, "->");
      break;
    case NodeKind::Until:
      print_binary(os, f, "U");
      break;
    case NodeKind::Chop:
      print_binary(os, f, ";");
      break;
    case NodeKind::TimedChop: {
      const int p = precedence(NodeKind::TimedChop);
      print(os, f->a, p, false);
      os << " ;[";
      for (std::size_t i = 0; i < f->bounds.size(); ++i) {
        if (i) os << " & ";
        os << "x " << cmp_op_text(f->bounds[i].op) << ' ' << format_number(f->bounds[i].value);
      }
      os << "] ";
      print(os, f->b, p, true);
      break;
    }
    case NodeKind::ForAllAttr:
      os << "forall " << f->name << " in "
         << (f->sel.kind == DomainSel::Kind::Here ? "here(" : "obs(") << f->sel.attr;
      if (f->sel.lo) os << ", " << format_number(*f->sel.lo) << ", " << format_number(*f->sel.hi);
      os << "): ";
      print(os, f->a, 0, true);
      break;
    case NodeKind::LetAttr:
      os << "let " << f->name << " := " << f->attr << " in ";
      print(os, f->a, 0, true);
      break;
  }
  if (need_parens) os << ')';
}

}  // namespace detail

/// Render a formula in the DSL with minimal parenthesization;
/// parse_formula(format_formula(f)) is structurally equal to f.
inline std::string format_formula(const Formula& f) {
  std::ostringstream os;
  detail::print(os, f, 0, true);
  return os.str();
}

}  // namespace tlids
