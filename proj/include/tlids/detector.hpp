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

#include <optional>

#include "tlids/eval.hpp"
#include "tlids/naive.hpp"
#include "tlids/trace.hpp"
#include "tlids/validate.hpp"

namespace tlids {

/// Whether a scan stops at the first firing scope. Detection verdicts are
/// identical either way; only the cost statistics differ, so cost
/// comparisons run exhaustive scans.
enum class ScanMode { ShortCircuit, Exhaustive };

struct DetectionResult {
  bool detected = false;
  std::optional<Scope> witness;  // first firing scope in scan order
  EvalStats stats;
};

namespace detail {

/// Scan scopes for one record under the per-logic policy:
///   Prop       - every single event;
///   LTL        - every suffix position;
///   ITL / RASL - every subinterval, ordered by lo then hi, restricted to
///                two or more events when the encoding is temporal (the
///                chop-star point-interval vacuity guard).
template <typename Fire>
std::optional<Scope> scan(const Trace& tr, Logic logic, bool temporal, ScanMode mode,
                          Fire&& fire) {
  const std::size_t n = tr.size();
  std::optional<Scope> first;
  auto hit = [&](Scope s) {
    if (!first) first = s;
    return mode == ScanMode::ShortCircuit;
  };
  if (logic == Logic::Prop) {
    for (std::size_t i = 0; i < n; ++i)
      if (fire(Scope::event(i)) && hit(Scope::event(i))) return first;
  } else if (logic == Logic::LTL) {
    for (std::size_t p = 0; p < n; ++p)
      if (fire(Scope::position(p)) && hit(Scope::position(p))) return first;
  } else {
    const std::size_t min_len = temporal ? 2 : 1;
    for (std::size_t lo = 0; lo < n; ++lo)
      for (std::size_t hi = lo + min_len - 1; hi < n; ++hi)
        if (fire(Scope::window(lo, hi)) && hit(Scope::window(lo, hi))) return first;
  }
  return first;
}

}  // namespace detail

/// Apply one signature encoding to one record. The encoding must validate
/// at `logic`. Returns the verdict, the first firing scope, and the cost
/// statistics aggregated over the whole scan (one shared memo table).
inline DetectionResult detect(const Trace& tr, const Formula& enc, Logic logic,
                              ScanMode mode = ScanMode::ShortCircuit) {
  if (auto v = validate_for_logic(enc, logic); !v.empty())
    throw FormulaError("encoding invalid for scan: " + v.front().message());
  const bool temporal = contains_temporal(enc);
  Evaluator ev(tr, logic, enc, /*exhaustive=*/mode == ScanMode::Exhaustive);
  auto fire = [&](Scope s) {
    switch (s.kind) {
      case Scope::Kind::EventIdx: return ev.at_event(s.lo);
      case Scope::Kind::Position: return ev.at_position(s.lo);
      case Scope::Kind::Window: return ev.on_window(s.lo, s.hi);
    }
    return false;
  };
  DetectionResult r;
  r.witness = detail::scan(tr, logic, temporal, mode, fire);
  r.detected = r.witness.has_value();
  r.stats.result = r.detected;
  r.stats.eval_count = ev.eval_count();
  r.stats.memo_entries = ev.memo_entries();
  return r;
}

/// Cost statistics of a scan; short-circuits on first detection unless
/// asked not to.
inline EvalStats scan_stats(const Trace& tr, const Formula& enc, Logic logic,
                            ScanMode mode = ScanMode::ShortCircuit) {
  return detect(tr, enc, logic, mode).stats;
}

/// Detection through the naive oracle only; used for generation-time
/// verification and witness re-checking, never through the memoized path.
inline std::optional<Scope> naive_detect(const Trace& tr, const Formula& enc, Logic logic) {
  const bool temporal = contains_temporal(enc);
  auto fire = [&](Scope s) { return eval_naive(enc, logic, tr, s); };
  return detail::scan(tr, logic, temporal, ScanMode::ShortCircuit, fire);
}

}  // namespace tlids
