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

#include <future>

#include "gen.hpp"
#include "tlids/eval.hpp"
#include "tlids/naive.hpp"
#include "tlids/parser.hpp"

using namespace tlids;

namespace {

Trace trace_of(std::initializer_list<std::vector<std::string>> props_per_event,
               double gap = 1.0) {
  std::vector<Event> ev;
  double t = 0.0;
  for (const auto& props : props_per_event) {
    ev.push_back(make_event(t, props));
    t += gap;
  }
  return Trace(std::move(ev));
}

}  // namespace

TEST_CASE("propositional evaluation on single events") {
  Formula land = parse_formula("attacked.recieve & p", Logic::Prop);
  CHECK(eval_prop(land, make_event(0.0, {"attacked.recieve", "p"})));
  CHECK_FALSE(eval_prop(land, make_event(0.0, {"attacked.recieve"})));

  Formula pod = parse_formula("m.size > 65536", Logic::Prop);
  CHECK_FALSE(eval_prop(pod, make_event(0.0, {}, {{"m.size", std::int64_t{65536}}})));
  CHECK(eval_prop(pod, make_event(0.0, {}, {{"m.size", std::int64_t{65537}}})));
  // absent attribute: comparison is false
  CHECK_FALSE(eval_prop(pod, make_event(0.0, {})));
}

TEST_CASE("finite-trace LTL: the SYN-flood pattern") {
  Formula nept = parse_formula(
      "attacked.recieve.SYN & <> attacked.send.SYNACK & [] !attacked.recieve.ACK",
      Logic::LTL);
  Trace good = trace_of({{"attacked.recieve.SYN"}, {"attacked.send.SYNACK"}, {}, {}});
  CHECK(eval_ltl(nept, good, 0));
  Trace acked = trace_of(
      {{"attacked.recieve.SYN"}, {"attacked.send.SYNACK"}, {}, {"attacked.recieve.ACK"}});
  CHECK_FALSE(eval_ltl(nept, acked, 0));
}

TEST_CASE("strong next is false at the last position") {
  Formula f = parse_formula("X p", Logic::LTL);
  Trace tr = trace_of({{"p"}, {"p"}});
  CHECK(eval_ltl(f, tr, 0));
  CHECK_FALSE(eval_ltl(f, tr, 1));
}

TEST_CASE("chop on a point interval means both at that event") {
  Formula f = parse_formula("p ; q", Logic::ITL);
  Trace both = trace_of({{"p", "q"}});
  Trace only_p = trace_of({{"p"}});
  CHECK(eval_itl(f, subinterval(both, 0, 0)));
  CHECK_FALSE(eval_itl(f, subinterval(only_p, 0, 0)));
}

TEST_CASE("chop-star is true on any point interval") {
  Formula f = parse_formula("(p & q)*", Logic::ITL);
  Trace tr = trace_of({{}});
  CHECK(eval_itl(f, subinterval(tr, 0, 0)));
}

TEST_CASE("the no-reply flood pattern over an interval") {
  Formula smurf = parse_formula("!attacked.send & (true ; attacked.recieve)*", Logic::ITL);
  Trace tr = trace_of({{}, {"attacked.recieve"}, {"attacked.recieve"}});
  CHECK(eval_itl(smurf, subinterval(tr, 0, 2)));
  Trace sends = trace_of({{"attacked.send"}, {"attacked.recieve"}});
  CHECK_FALSE(eval_itl(smurf, subinterval(sends, 0, 1)));
  Trace no_recv = trace_of({{}, {}, {}});
  CHECK_FALSE(eval_itl(smurf, subinterval(no_recv, 0, 2)));
}

TEST_CASE("skip holds exactly on two-event intervals") {
  Formula f = parse_formula("skip", Logic::RASL);
  Trace tr = trace_of({{}, {}, {}});
  CHECK_FALSE(eval_rasl(f, subinterval(tr, 0, 0)));
  CHECK(eval_rasl(f, subinterval(tr, 0, 1)));
  CHECK_FALSE(eval_rasl(f, subinterval(tr, 0, 2)));
}

TEST_CASE("elapsed-time constraint on a point interval") {
  Formula f = parse_formula("Tf <= 0.01", Logic::RASL);
  Trace tr = trace_of({{}, {}}, 5.0);
  CHECK(eval_rasl(f, subinterval(tr, 0, 0)));
  CHECK_FALSE(eval_rasl(f, subinterval(tr, 0, 1)));
}

namespace {

Trace mail_run(const std::vector<double>& gaps) {
  std::vector<Event> ev;
  double t = 0.0;
  for (std::size_t i = 0; i <= gaps.size(); ++i) {
    ev.push_back(make_event(
        t, {"attacked.recieve.mail", "mail.p" + std::to_string(i + 1)}, {{"src", "h1"}}));
    if (i < gaps.size()) t += gaps[i];
  }
  return Trace(std::move(ev));
}

Formula mailbomb_body() {
  std::string text = "(mail.p1";
  for (int i = 2; i <= 10; ++i) text += " ;[x < 0.01] mail.p" + std::to_string(i);
  text += ")*";
  return parse_formula(text, Logic::RASL);
}

}  // namespace

TEST_CASE("ten fast mails satisfy the timed chain; one slow gap breaks it") {
  Formula f = mailbomb_body();
  Trace fast = mail_run(std::vector<double>(9, 0.005));
  CHECK(eval_rasl(f, subinterval(fast, 0, 9)));
  CHECK(naive_rasl(f, subinterval(fast, 0, 9)));

  for (int slow = 0; slow < 9; slow += 4) {
    std::vector<double> gaps(9, 0.005);
    gaps[slow] = 0.02;
    Trace t2 = mail_run(gaps);
    CHECK_FALSE(eval_rasl(f, subinterval(t2, 0, 9)));
    CHECK_FALSE(naive_rasl(f, subinterval(t2, 0, 9)));
  }
}

TEST_CASE("fusion-partition example checked against brute force") {
  // one chunk covering the whole interval satisfies true;attacked.recieve
  Formula smurf = parse_formula("!attacked.send & (true ; attacked.recieve)*", Logic::ITL);
  Trace tr = trace_of({{}, {"attacked.recieve"}, {"attacked.recieve"}});
  CHECK(naive_itl(smurf, subinterval(tr, 0, 2)));
}

TEST_CASE("LTL dualities on finite traces") {
  SplitMix64 rng(11);
  Formula p = f_atom("a");
  for (int i = 0; i < 200; ++i) {
    Trace tr = testgen::random_trace(rng, 8);
    std::size_t pos = static_cast<std::size_t>(rng.uniform_int(0, tr.size() - 1));
    // <>a  <->  ![]!a
    bool ev = eval_ltl(f_eventually(p), tr, pos);
    bool dual = !eval_ltl(f_globally(f_not(p)), tr, pos);
    CHECK(ev == dual);
    // []a at pos  <->  a at every position >= pos
    bool box = eval_ltl(f_globally(p), tr, pos);
    bool direct = true;
    for (std::size_t k = pos; k < tr.size(); ++k) direct = direct && tr[k].has_prop("a");
    CHECK(box == direct);
    // <>a at pos  <->  a somewhere at or after pos
    bool some = false;
    for (std::size_t k = pos; k < tr.size(); ++k) some = some || tr[k].has_prop("a");
    CHECK(ev == some);
  }
}

TEST_CASE("chop is associative") {
  SplitMix64 rng(12);
  for (int i = 0; i < 150; ++i) {
    Trace tr = testgen::random_trace(rng, 7);
    Formula a = testgen::random_valid_formula(rng, Logic::ITL, 2);
    Formula b = testgen::random_valid_formula(rng, Logic::ITL, 2);
    Formula c = testgen::random_valid_formula(rng, Logic::ITL, 2);
    Formula left = f_chop(f_chop(a, b), c);
    Formula right = f_chop(a, f_chop(b, c));
    std::size_t lo = static_cast<std::size_t>(rng.uniform_int(0, tr.size() - 1));
    std::size_t hi = static_cast<std::size_t>(rng.uniform_int(lo, tr.size() - 1));
    Interval iv = subinterval(tr, lo, hi);
    CHECK(eval_itl(left, iv) == eval_itl(right, iv));
  }
}

TEST_CASE("monotone embeddings") {
  SplitMix64 rng(13);
  for (int i = 0; i < 300; ++i) {
    Trace tr = testgen::random_trace(rng, 8);
    std::size_t pos = static_cast<std::size_t>(rng.uniform_int(0, tr.size() - 1));
    // Prop formula read by the LTL engine at pos == propositional reading of that event
    Formula p = testgen::random_valid_formula(rng, Logic::Prop, 3);
    CHECK(eval_ltl(p, tr, pos) == naive_prop(p, tr, pos));
    // ITL formula read by the RASL engine == ITL reading (conservative extension)
    Formula q = testgen::random_valid_formula(rng, Logic::ITL, 3);
    std::size_t hi = static_cast<std::size_t>(rng.uniform_int(pos, tr.size() - 1));
    Interval iv = subinterval(tr, pos, hi);
    CHECK(eval_rasl(q, iv) == eval_itl(q, iv));
  }
}

TEST_CASE("operator intuitions over intervals") {
  SplitMix64 rng(14);
  Formula p = f_atom("a");
  for (int i = 0; i < 200; ++i) {
    Trace tr = testgen::random_trace(rng, 8);
    std::size_t lo = static_cast<std::size_t>(rng.uniform_int(0, tr.size() - 1));
    std::size_t hi = static_cast<std::size_t>(rng.uniform_int(lo, tr.size() - 1));
    Interval iv = subinterval(tr, lo, hi);
    // []p on an interval: p at every position in it
    bool box = eval_itl(f_globally(p), iv);
    bool all = true;
    for (std::size_t k = lo; k <= hi; ++k) all = all && tr[k].has_prop("a");
    CHECK(box == all);
    // <>p: p somewhere in it
    bool some = false;
    for (std::size_t k = lo; k <= hi; ++k) some = some || tr[k].has_prop("a");
    CHECK(eval_itl(f_eventually(p), iv) == some);
    // p1;p2 witnessed by a fusion index
    Formula chop = f_chop(f_atom("a"), f_atom("b"));
    bool witnessed = false;
    for (std::size_t m = lo; m <= hi; ++m)
      witnessed = witnessed || (tr[lo].has_prop("a") && tr[m].has_prop("b"));
    CHECK(eval_itl(chop, iv) == witnessed);
    // timed chop additionally bounds the first chunk's duration
    Formula timed = f_timed_chop(f_atom("a"), {TimeBound{CmpOp::Lt, 3.0}}, f_atom("b"));
    bool timed_witness = false;
    for (std::size_t m = lo; m <= hi; ++m)
      timed_witness = timed_witness || (tr[lo].has_prop("a") && tr[m].has_prop("b") &&
                                        tr[m].t - tr[lo].t < 3.0);
    CHECK(eval_rasl(timed, iv) == timed_witness);
  }
}

TEST_CASE("quantifier domains: event-local versus scope-wide") {
  std::vector<Event> ev;
  ev.push_back(make_event(0.0, {"udp"}, {{"sender", "h1"}, {"port", std::int64_t{9}}}));
  ev.push_back(make_event(1.0, {"udp"}, {{"sender", "h2"}, {"port", std::int64_t{9}}}));
  Trace tr(std::move(ev));

  Formula local = parse_formula_any("forall i in here(sender): sender = i");
  Formula wide = parse_formula_any("forall i in obs(sender): sender = i");
  // event-local: each event agrees with its own sender
  CHECK(eval_ltl(local, tr, 0));
  // scope-wide: position 0 sees h2 as well and the equality fails
  CHECK_FALSE(eval_ltl(wide, tr, 0));
  CHECK(eval_ltl(wide, tr, 1));
  // empty domain is vacuously true
  Formula none = parse_formula_any("forall i in obs(absent): absent = i");
  CHECK(eval_ltl(none, tr, 0));
}

TEST_CASE("let binds at the anchor event") {
  Formula teardrop = parse_formula(
      "let N := m1.TotalLength in m1.FragmentOffset = 0 & m1.TotalLength = N & "
      "<> (m2.FragmentOffset < N)",
      Logic::LTL);
  std::vector<Event> ev;
  ev.push_back(make_event(0.0, {}, {{"m1.FragmentOffset", std::int64_t{0}},
                                    {"m1.TotalLength", std::int64_t{320}}}));
  ev.push_back(make_event(0.1, {}, {{"m2.FragmentOffset", std::int64_t{200}}}));
  Trace tr(std::move(ev));
  CHECK(eval_ltl(teardrop, tr, 0));

  std::vector<Event> ev2;
  ev2.push_back(make_event(0.0, {}, {{"m1.FragmentOffset", std::int64_t{0}},
                                     {"m1.TotalLength", std::int64_t{320}}}));
  ev2.push_back(make_event(0.1, {}, {{"m2.FragmentOffset", std::int64_t{400}}}));
  Trace no_overlap(std::move(ev2));
  CHECK_FALSE(eval_ltl(teardrop, no_overlap, 0));

  // anchor without the attribute: comparisons against the binder are false
  Trace missing = trace_of({{}, {}});
  CHECK_FALSE(eval_ltl(teardrop, missing, 0));
}

TEST_CASE("stats: single atom on a point scope") {
  Formula f = f_atom("a");
  Trace tr = trace_of({{"a"}});
  EvalStats st = eval_stats(f, Logic::ITL, tr, Scope::window(0, 0));
  CHECK(st.result);
  CHECK(st.eval_count == 1);
  CHECK(st.memo_entries <= 1);
}

TEST_CASE("stats: repeated subformula evaluation hits the memo") {
  // (a ; b) evaluated over one window touches b at each fusion point;
  // a second pass over the same window costs visits but no new entries.
  Formula f = parse_formula("a ; b", Logic::ITL);
  Trace tr = trace_of({{"a"}, {}, {"b"}});
  Evaluator ev(tr, Logic::ITL, f);
  ev.on_window(0, 2);
  auto entries_before = ev.memo_entries();
  auto count_before = ev.eval_count();
  ev.on_window(0, 2);
  CHECK(ev.memo_entries() == entries_before);
  CHECK(ev.eval_count() == count_before + 1);
}

TEST_CASE("stats are deterministic across runs and threads") {
  SplitMix64 rng(15);
  Formula f = testgen::random_valid_formula(rng, Logic::RASL, 4);
  Trace tr = testgen::random_trace(rng, 8);
  auto run = [&]() {
    return eval_stats(f, Logic::RASL, tr, Scope::window(0, tr.size() - 1));
  };
  EvalStats base = run();
  std::vector<std::future<EvalStats>> futs;
  for (int i = 0; i < 4; ++i) futs.push_back(std::async(std::launch::async, run));
  for (auto& fu : futs) {
    EvalStats st = fu.get();
    CHECK(st.result == base.result);
    CHECK(st.eval_count == base.eval_count);
    CHECK(st.memo_entries == base.memo_entries);
  }
}

TEST_CASE("memo entries never exceed visit count") {
  SplitMix64 rng(16);
  for (int i = 0; i < 100; ++i) {
    Formula f = testgen::random_valid_formula(rng, Logic::RASL, 4);
    Trace tr = testgen::random_trace(rng, 6);
    EvalStats st = eval_stats(f, Logic::RASL, tr, Scope::window(0, tr.size() - 1));
    CHECK(st.eval_count >= 1);
    CHECK(st.memo_entries <= st.eval_count);
  }
}
