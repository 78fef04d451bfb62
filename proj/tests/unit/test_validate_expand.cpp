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

#include "tlids/expand.hpp"
#include "tlids/parser.hpp"

using namespace tlids;

TEST_CASE("membership per connective") {
  CHECK(valid_for(parse_formula_any("p U q"), Logic::LTL));
  CHECK(valid_for(parse_formula_any("p"), Logic::Prop));
  CHECK_FALSE(valid_for(parse_formula_any("X p"), Logic::Prop));
  CHECK_FALSE(valid_for(parse_formula_any("p ; q"), Logic::LTL));
  CHECK_FALSE(valid_for(parse_formula_any("p || q"), Logic::LTL));
  CHECK(valid_for(parse_formula_any("p || q"), Logic::ITL));
  CHECK_FALSE(valid_for(parse_formula_any("skip"), Logic::ITL));
  CHECK_FALSE(valid_for(parse_formula_any("a ;[x<1] b"), Logic::ITL));

  auto v = validate_for_logic(parse_formula_any("Tf <= 0.01"), Logic::ITL);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message().find("timed constraint") != std::string::npos);
  CHECK(v[0].required == Logic::RASL);
}

TEST_CASE("obs quantification is temporal, here is not") {
  CHECK(valid_for(parse_formula_any("forall i in here(s): s = i"), Logic::Prop));
  CHECK_FALSE(valid_for(parse_formula_any("forall i in obs(s): s = i"), Logic::Prop));
  CHECK(valid_for(parse_formula_any("forall i in obs(s): s = i"), Logic::LTL));
}

TEST_CASE("validity is monotone in the logic order") {
  const char* samples[] = {
      "p", "p & q -> r", "X (p U q)", "<> p & [] q", "(p ; q)* || r",
      "a ;[x < 1] b & Tf >= 0.5", "skip ; p",
      "forall i in obs(x, 0, 9): x = i", "let v := y in y = v",
  };
  for (const char* text : samples) {
    Formula f = parse_formula_any(text);
    for (int l = 0; l < 4; ++l) {
      if (!valid_for(f, static_cast<Logic>(l))) continue;
      for (int m = l + 1; m < 4; ++m) CHECK(valid_for(f, static_cast<Logic>(m)));
    }
  }
}

TEST_CASE("eventually expands per logic") {
  Formula f = parse_formula_any("<> p");
  Formula ltl = expand_derived(f, Logic::LTL);
  CHECK(equals(ltl, parse_formula_any("true U p")));
  Formula itl = expand_derived(f, Logic::ITL);
  CHECK(equals(itl, parse_formula_any("true ; p")));
}

TEST_CASE("timed chop expands to a constrained first chunk") {
  Formula f = parse_formula_any("p ;[x < 0.01] q");
  Formula core = expand_derived(f, Logic::RASL);
  // (p & Tf < 0.01) ; q with the conjunction in core (negation) form
  CHECK(equals(core, parse_formula_any("!(!p | !(Tf < 0.01)) ; q")));
}

TEST_CASE("next at RASL derives from skip") {
  Formula f = parse_formula_any("X p");
  CHECK(equals(expand_derived(f, Logic::RASL), parse_formula_any("skip ; p")));
  CHECK(equals(expand_derived(f, Logic::ITL), f));
}

TEST_CASE("expansion produces core form and is idempotent") {
  const char* samples[] = {
      "p & q", "p -> q", "<> p", "[] p", "p || q", "a ;[x < 1 & x >= 0.25] b",
      "X (p & <> q)", "forall i in here(x): x = i & <> p",
  };
  for (const char* text : samples) {
    Formula f = parse_formula_any(text);
    for (Logic l : {Logic::LTL, Logic::ITL, Logic::RASL}) {
      if (!valid_for(f, l)) continue;
      Formula once = expand_derived(f, l);
      CHECK(is_core_form(once, l));
      CHECK(equals(once, expand_derived(once, l)));
    }
  }
}
