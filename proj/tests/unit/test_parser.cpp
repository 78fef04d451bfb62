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

#include <catch2/catch_amalgamated.hpp>

#include "tlids/parser.hpp"
#include "tlids/rng.hpp"

using namespace tlids;

TEST_CASE("propositional conjunction") {
  Formula f = parse_formula("attacked.recieve & p", Logic::Prop);
  REQUIRE(f->kind == NodeKind::And);
  CHECK(f->a->kind == NodeKind::Atom);
  CHECK(f->a->name == "attacked.recieve");
  CHECK(f->b->name == "p");
}

TEST_CASE("constant true") {
  Formula f = parse_formula("true", Logic::Prop);
  CHECK(is_const_true(f));
}

TEST_CASE("chop is rejected below ITL") {
  try {
    parse_formula("phi ; psi", Logic::LTL);
    FAIL("expected FormulaError");
  } catch (const FormulaError& e) {
    CHECK(std::string(e.what()).find("chop not in LTL") != std::string::npos);
  }
  CHECK_NOTHROW(parse_formula("phi ; psi", Logic::ITL));
}

TEST_CASE("precedence: and binds tighter than chop, chop tighter than or") {
  Formula f = parse_formula_any("r & s* | c ; d*");
  REQUIRE(f->kind == NodeKind::Or);
  CHECK(f->a->kind == NodeKind::And);
  CHECK(f->a->b->kind == NodeKind::ChopStar);
  CHECK(f->b->kind == NodeKind::Chop);
  CHECK(f->b->b->kind == NodeKind::ChopStar);
}

TEST_CASE("chop chains associate to the right") {
  Formula f = parse_formula_any("a ; b ; c");
  REQUIRE(f->kind == NodeKind::Chop);
  CHECK(f->a->name == "a");
  REQUIRE(f->b->kind == NodeKind::Chop);
  CHECK(f->b->a->name == "b");
  CHECK(f->b->b->name == "c");
}

TEST_CASE("timed chop constrains the chunk to its left") {
  Formula f = parse_formula_any("a ;[x < 0.01] b ;[x >= 2] c");
  REQUIRE(f->kind == NodeKind::TimedChop);
  REQUIRE(f->bounds.size() == 1);
  CHECK(f->bounds[0].op == CmpOp::Lt);
  CHECK(f->bounds[0].value == 0.01);
  REQUIRE(f->b->kind == NodeKind::TimedChop);
  CHECK(f->b->bounds[0].op == CmpOp::Ge);
}

TEST_CASE("star has highest postfix precedence") {
  Formula f = parse_formula_any("a ; b*");
  REQUIRE(f->kind == NodeKind::Chop);
  CHECK(f->b->kind == NodeKind::ChopStar);
}

TEST_CASE("negation needs parentheses around disjunctions") {
  Formula f = parse_formula_any("!(a | b)");
  REQUIRE(f->kind == NodeKind::Not);
  CHECK(f->a->kind == NodeKind::Or);
  Formula g = parse_formula_any("!a | b");
  CHECK(g->kind == NodeKind::Or);
}

TEST_CASE("until, next, sugar operators") {
  Formula f = parse_formula_any("true U p");
  REQUIRE(f->kind == NodeKind::Until);
  CHECK(is_const_true(f->a));
  CHECK(parse_formula_any("X p")->kind == NodeKind::Next);
  CHECK(parse_formula_any("<> p")->kind == NodeKind::Eventually);
  CHECK(parse_formula_any("[] p")->kind == NodeKind::Globally);
  Formula u = parse_formula_any("a U b & c");  // U tighter than &
  CHECK(u->kind == NodeKind::And);
  CHECK(u->a->kind == NodeKind::Until);
}

TEST_CASE("implication is right associative and loosest") {
  Formula f = parse_formula_any("a -> b -> c");
  REQUIRE(f->kind == NodeKind::Implies);
  CHECK(f->b->kind == NodeKind::Implies);
  Formula g = parse_formula_any("a & b -> c");
  CHECK(g->kind == NodeKind::Implies);
  CHECK(g->a->kind == NodeKind::And);
}

TEST_CASE("attribute comparisons") {
  Formula f = parse_formula_any("m.size > 65536");
  REQUIRE(f->kind == NodeKind::AttrCmp);
  CHECK(f->name == "m.size");
  CHECK(f->op == CmpOp::Gt);
  CHECK(f->num == 65536.0);

  Formula neg = parse_formula_any("literal.value = -1");
  CHECK(neg->num == -1.0);

  Formula s = parse_formula_any("file.p = \"rhosts\"");
  CHECK(s->rhs == Node::Rhs::String);
  CHECK(s->str == "rhosts");
  CHECK_THROWS_AS(parse_formula_any("file.p < \"rhosts\""), ParseError);

  Formula hy = parse_formula_any("attacked.receive.http.accept-encoding = 1");
  CHECK(hy->name == "attacked.receive.http.accept-encoding");
}

TEST_CASE("elapsed-time comparisons") {
  Formula f = parse_formula_any("Tf < 0.01");
  REQUIRE(f->kind == NodeKind::ElapsedCmp);
  CHECK(f->num == 0.01);
  CHECK_THROWS_AS(parse_formula_any("Tf < -1"), ParseError);
}

TEST_CASE("binders") {
  Formula f = parse_formula_any("forall i in here(sender): sender = i");
  REQUIRE(f->kind == NodeKind::ForAllAttr);
  CHECK(f->sel.kind == DomainSel::Kind::Here);
  CHECK(f->a->rhs == Node::Rhs::Var);

  Formula g = parse_formula_any("forall i in obs(src.port, 1024, 65535): src.port = i");
  CHECK(g->sel.kind == DomainSel::Kind::Obs);
  CHECK(*g->sel.lo == 1024.0);

  Formula l = parse_formula_any("let n := m1.TotalLength in m2.FragmentOffset < n");
  REQUIRE(l->kind == NodeKind::LetAttr);
  CHECK(l->attr == "m1.TotalLength");

  // binder body extends to the end of the bracket
  Formula b = parse_formula_any("a & (forall i in here(x): p | q)");
  CHECK(b->kind == NodeKind::And);
  CHECK(b->b->kind == NodeKind::ForAllAttr);
  CHECK(b->b->a->kind == NodeKind::Or);

  CHECK_THROWS_AS(parse_formula_any("sender = i"), ParseError);  // unbound
  CHECK_THROWS_AS(parse_formula_any("forall i in here(a): forall i in here(b): p"),
                  ParseError);  // shadowing
  CHECK_THROWS_AS(parse_formula_any("forall i in here(a, 1, 2): p"), ParseError);
}

TEST_CASE("parallel composition token") {
  Formula f = parse_formula_any("a || b | c");
  REQUIRE(f->kind == NodeKind::Or);
  CHECK(f->a->kind == NodeKind::Parallel);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_formula_any("a & & b");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
  CHECK_THROWS_AS(parse_formula_any(""), ParseError);
  CHECK_THROWS_AS(parse_formula_any("(a"), ParseError);
  CHECK_THROWS_AS(parse_formula_any("a b"), ParseError);
}

// Random AST round trip: parse(format(f)) == f.
namespace {

Formula random_formula(SplitMix64& rng, int depth, std::vector<std::string>& bound) {
  const char* atoms[] = {"a", "b", "c.d", "p"};
  const char* attrs[] = {"x", "y.z"};
  if (depth == 0 || rng.next_unit() < 0.3) {
    switch (rng.uniform_int(0, 4)) {
      case 0: return f_true();
      case 1: return f_atom(atoms[rng.uniform_int(0, 3)]);
      case 2:
        return f_attr_cmp(attrs[rng.uniform_int(0, 1)],
                          static_cast<CmpOp>(rng.uniform_int(0, 5)),
                          rng.uniform_int(-2, 4));
      case 3:
        if (!bound.empty())
          return f_attr_cmp_var(attrs[rng.uniform_int(0, 1)],
                                static_cast<CmpOp>(rng.uniform_int(0, 5)),
                                bound[rng.uniform_int(0, bound.size() - 1)]);
        return f_atom(atoms[rng.uniform_int(0, 3)]);
      default: return f_elapsed(static_cast<CmpOp>(rng.uniform_int(0, 3)), 0.25);
    }
  }
  auto sub = [&](int d) { return random_formula(rng, d, bound); };
  switch (rng.uniform_int(0, 13)) {
    case 0: return f_not(sub(depth - 1));
    case 1: return f_and(sub(depth - 1), sub(depth - 1));
    case 2: return f_or(sub(depth - 1), sub(depth - 1));
    case 3: return f_implies(sub(depth - 1), sub(depth - 1));
    case 4: return f_next(sub(depth - 1));
    case 5: return f_until(sub(depth - 1), sub(depth - 1));
    case 6: return f_eventually(sub(depth - 1));
    case 7: return f_globally(sub(depth - 1));
    case 8: return f_chop(sub(depth - 1), sub(depth - 1));
    case 9: return f_chop_star(sub(depth - 1));
    case 10: return f_parallel(sub(depth - 1), sub(depth - 1));
    case 11:
      return f_timed_chop(sub(depth - 1), {TimeBound{CmpOp::Lt, 0.5}}, sub(depth - 1));
    case 12: {
      std::string var = "v" + std::to_string(bound.size());
      bound.push_back(var);
      DomainSel sel;
      sel.kind = rng.next_unit() < 0.5 ? DomainSel::Kind::Here : DomainSel::Kind::Obs;
      sel.attr = "x";
      if (sel.kind == DomainSel::Kind::Obs && rng.next_unit() < 0.5) {
        sel.lo = 0.0;
        sel.hi = 3.0;
      }
      Formula body = sub(depth - 1);
      bound.pop_back();
      return f_forall(var, sel, std::move(body));
    }
    default: {
      std::string var = "w" + std::to_string(bound.size());
      bound.push_back(var);
      Formula body = sub(depth - 1);
      bound.pop_back();
      return f_let(var, "y.z", std::move(body));
    }
  }
}

}  // namespace

TEST_CASE("random round trip through the printer") {
  SplitMix64 rng(20260809);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> bound;
    Formula f = random_formula(rng, 4, bound);
    std::string text = format_formula(f);
    INFO(text);
    Formula back = parse_formula_any(text);
    CHECK(equals(f, back));
    CHECK(format_formula(back) == text);
  }
}
