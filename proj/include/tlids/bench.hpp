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

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tlids/corpus.hpp"
#include "tlids/detector.hpp"
#include "tlids/signatures.hpp"

namespace tlids {

// ---------------------------------------------------------------------------
// The comparative benchmark: every logic's algorithm scans the same corpus
// with each attack's encoding at that logic. An attack with no encoding at
// a logic contributes a zero row (the algorithm cannot express it). True
// positives count attack records detected by their own attack's encoding;
// false positives count benign and decoy records detected by any encoding.
// ---------------------------------------------------------------------------

struct BenchCell {
  std::size_t records_scanned = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  double tp_rate = 0.0;
  double fp_rate = 0.0;
  double mean_eval_count = 0.0;
  double mean_wall_micros = 0.0;
  std::uint64_t peak_memo_entries = 0;

  // aggregation internals
  std::size_t attack_records = 0;  // denominators
  std::size_t nonattack_records = 0;
  std::uint64_t total_eval = 0;
  double total_wall = 0.0;
};

struct BenchRow {
  std::string key;  // attack name, category name, or "total"
  Logic logic = Logic::Prop;
  BenchCell cell;
};

/// Per-decoy-family precision probe: the weakest faithful encoding versus
/// the time-erased form on the decoy records of one attack.
struct PrecisionRow {
  AttackId attack{};
  std::size_t decoys = 0;
  std::size_t rasl_false_positives = 0;
  std::size_t erased_itl_false_positives = 0;
};

/// Cost probe on uniform 40-event stress records, exhaustive scans.
struct StressRow {
  AttackId attack{};
  std::uint64_t itl_eval_count = 0;
  std::uint64_t rasl_eval_count = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<PrecisionRow> precision;
  std::vector<StressRow> stress;
  std::vector<Logic> logics;
  std::string seed;
  std::string manifest_hash;
  bool short_circuit = true;
};

struct BenchOptions {
  std::vector<Logic> logics = {Logic::Prop, Logic::LTL, Logic::ITL, Logic::RASL};
  ScanMode mode = ScanMode::ShortCircuit;
  unsigned threads = 0;      // 0: all cores (counting pass only)
  bool timing_pass = true;   // single-threaded wall-clock pass
  bool stress_pass = true;
};

namespace detail {

struct Task {
  AttackId attack{};
  Logic logic = Logic::Prop;
  const Formula* enc = nullptr;
};

inline BenchCell scan_task(const Task& task, const std::vector<Record>& records,
                           ScanMode mode) {
  BenchCell cell;
  for (const Record& rec : records) {
    DetectionResult r = detect(rec.trace, *task.enc, task.logic, mode);
    ++cell.records_scanned;
    cell.total_eval += r.stats.eval_count;
    cell.peak_memo_entries = std::max(cell.peak_memo_entries, r.stats.memo_entries);
    if (rec.label) {
      ++cell.attack_records;
      if (*rec.label == task.attack && r.detected) ++cell.true_positives;
    } else {
      ++cell.nonattack_records;
      if (r.detected) ++cell.false_positives;
    }
  }
  return cell;
}

inline void finish_cell(BenchCell& c, std::size_t label_records) {
  c.attack_records = label_records;
  c.tp_rate = label_records ? static_cast<double>(c.true_positives) / label_records : 0.0;
  c.fp_rate = c.nonattack_records
                  ? static_cast<double>(c.false_positives) / c.nonattack_records
                  : 0.0;
  c.mean_eval_count =
      c.records_scanned ? static_cast<double>(c.total_eval) / c.records_scanned : 0.0;
  c.mean_wall_micros = c.records_scanned ? c.total_wall / c.records_scanned : 0.0;
}

/// Uniform stress record: the attack's own step material repeated to 40
/// events at millisecond pacing, ordinal tags applied.
inline Trace stress_record(AttackId a, const Thresholds& th) {
  SplitMix64 r2 = SplitMix64::substream(0xABCDEF, static_cast<std::uint64_t>(a));
  Script sc = attack_script(a, Variant::Canonical, r2, th);
  std::vector<Event> events;
  double t = 0.0;
  while (events.size() < 40) {
    for (const Step& s : sc.steps) {
      if (events.size() >= 40) break;
      events.push_back(make_event(t, std::vector<std::string>(s.props),
                                  std::map<std::string, AttrValue>(s.attrs)));
      t = std::round((t + 0.001) * 1e6) / 1e6;
    }
  }
  tag_probe_ordinals(events);
  return Trace(std::move(events));
}

}  // namespace detail

/// Encoding used for the stress-cost probe at ITL and RASL. The sweep and
/// port-scan attacks run through their study forms, whose point is the
/// negation-over-chop embedment; that structure reads through the derived
/// box, so the study forms are taken in core form (erased of elapsed
/// constraints at ITL). Every other attack runs through its library
/// encoding as the detector evaluates it, with the mail-chain erasure
/// standing in at ITL.
inline std::optional<Formula> stress_encoding(const SignatureSet& s, Logic logic) {
  if (s.attack == AttackId::ipsweep || s.attack == AttackId::portscan) {
    Formula literal = parse_formula(*s.study_text, Logic::RASL);
    if (logic != Logic::RASL) literal = erase_elapsed(literal);
    return expand_derived(literal, logic);
  }
  if (auto it = s.encodings.find(logic); it != s.encodings.end()) return it->second;
  if (s.minimal_logic == Logic::RASL && logic == Logic::ITL) return weaken(s, Logic::ITL);
  return std::nullopt;
}

inline BenchReport run_bench(const LoadedCorpus& corpus,
                             const std::vector<SignatureSet>& sigs,
                             const BenchOptions& opts = {}) {
  BenchReport report;
  report.logics = opts.logics;
  report.short_circuit = opts.mode == ScanMode::ShortCircuit;
  if (auto it = corpus.manifest.find("seed"); it != corpus.manifest.end())
    report.seed = it->second;
  report.manifest_hash = corpus.manifest_hash;

  std::map<AttackId, std::size_t> label_count;
  for (const Record& r : corpus.records)
    if (r.label) ++label_count[*r.label];

  // counting pass, parallel over (attack, logic) tasks
  std::vector<detail::Task> tasks;
  for (Logic logic : opts.logics)
    for (const SignatureSet& s : sigs)
      if (auto it = s.encodings.find(logic); it != s.encodings.end())
        tasks.push_back(detail::Task{s.attack, logic, &it->second});
  std::vector<BenchCell> cells(tasks.size());
  {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned n = opts.threads ? opts.threads : (hw ? hw : 1);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
        cells[i] = detail::scan_task(tasks[i], corpus.records, opts.mode);
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n && i < tasks.size(); ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  // timing pass: contractually single-threaded, one scan per task/record
  if (opts.timing_pass) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      double total = 0.0;
      for (const Record& rec : corpus.records) {
        auto t0 = std::chrono::steady_clock::now();
        (void)detect(rec.trace, *tasks[i].enc, tasks[i].logic, opts.mode);
        auto t1 = std::chrono::steady_clock::now();
        total += std::chrono::duration<double, std::micro>(t1 - t0).count();
      }
      cells[i].total_wall = total;
    }
  }

  // assemble attack rows (zero rows where no encoding exists), then the
  // category and total aggregates
  for (Logic logic : opts.logics) {
    std::map<Category, BenchCell> by_cat;
    std::map<Category, std::size_t> cat_records;
    BenchCell total;
    std::size_t total_records = 0;
    for (const SignatureSet& s : sigs) {
      BenchCell cell;
      for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].attack == s.attack && tasks[i].logic == logic) cell = cells[i];
      const std::size_t labeled =
          label_count.count(s.attack) ? label_count.at(s.attack) : 0;
      detail::finish_cell(cell, labeled);
      report.rows.push_back(BenchRow{attack_name(s.attack), logic, cell});

      BenchCell& cat = by_cat[s.category];
      cat.records_scanned += cell.records_scanned;
      cat.true_positives += cell.true_positives;
      cat.false_positives += cell.false_positives;
      cat.nonattack_records += cell.nonattack_records;
      cat.total_eval += cell.total_eval;
      cat.total_wall += cell.total_wall;
      cat.peak_memo_entries = std::max(cat.peak_memo_entries, cell.peak_memo_entries);
      cat_records[s.category] += labeled;
    }
    for (Category c : {Category::DOS, Category::Probing, Category::U2R, Category::R2L}) {
      BenchCell cell = by_cat[c];
      detail::finish_cell(cell, cat_records[c]);
      report.rows.push_back(BenchRow{category_name(c), logic, cell});
      total.records_scanned += cell.records_scanned;
      total.true_positives += cell.true_positives;
      total.false_positives += cell.false_positives;
      total.nonattack_records += cell.nonattack_records;
      total.total_eval += cell.total_eval;
      total.total_wall += cell.total_wall;
      total.peak_memo_entries = std::max(total.peak_memo_entries, cell.peak_memo_entries);
      total_records += cat_records[c];
    }
    detail::finish_cell(total, total_records);
    report.rows.push_back(BenchRow{"total", logic, total});
  }

  // precision probe: decoys against the weakest faithful encoding and the
  // time-erased form
  for (const SignatureSet& s : sigs) {
    if (s.minimal_logic != Logic::RASL) continue;
    PrecisionRow row;
    row.attack = s.attack;
    auto erased = weaken(s, Logic::ITL);
    for (const Record& rec : corpus.records) {
      if (rec.variant != Variant::Decoy || rec.mimics != s.attack) continue;
      ++row.decoys;
      if (detect(rec.trace, s.encodings.at(Logic::RASL), Logic::RASL).detected)
        ++row.rasl_false_positives;
      if (erased && detect(rec.trace, *erased, Logic::ITL).detected)
        ++row.erased_itl_false_positives;
    }
    if (row.decoys) report.precision.push_back(row);
  }

  // stress probe: exhaustive scans of uniform 40-event records
  if (opts.stress_pass) {
    Thresholds th;
    for (const SignatureSet& s : sigs) {
      StressRow row;
      row.attack = s.attack;
      Trace tr = detail::stress_record(s.attack, th);
      if (auto itl = stress_encoding(s, Logic::ITL))
        row.itl_eval_count =
            detect(tr, *itl, Logic::ITL, ScanMode::Exhaustive).stats.eval_count;
      if (auto rasl = stress_encoding(s, Logic::RASL))
        row.rasl_eval_count =
            detect(tr, *rasl, Logic::RASL, ScanMode::Exhaustive).stats.eval_count;
      report.stress.push_back(row);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Comparison summary: the ordering, zero and equality facts the benchmark
// is expected to reproduce, evaluated against the report.
// ---------------------------------------------------------------------------

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ComparisonSummary {
  std::vector<Assertion> assertions;
  bool all_pass = true;
};

namespace detail {

inline const BenchCell* find_cell(const BenchReport& r, const std::string& key, Logic l) {
  for (const auto& row : r.rows)
    if (row.key == key && row.logic == l) return &row.cell;
  return nullptr;
}

}  // namespace detail

inline ComparisonSummary compare(const BenchReport& report) {
  ComparisonSummary out;
  auto assert_that = [&](const std::string& name, bool pass, const std::string& detail) {
    out.assertions.push_back(Assertion{name, pass, detail});
    out.all_pass = out.all_pass && pass;
  };
  bool all_logics = true;
  for (Logic l : {Logic::Prop, Logic::LTL, Logic::ITL, Logic::RASL}) {
    bool present = false;
    for (Logic g : report.logics) present = present || g == l;
    all_logics = all_logics && present;
  }
  if (!all_logics) {
    assert_that("all-four-logics-present", false,
                "comparison requires prop, ltl, itl and rasl rows");
    return out;
  }
  auto tp = [&](const std::string& key, Logic l) {
    const BenchCell* c = detail::find_cell(report, key, l);
    return c ? c->true_positives : 0;
  };
  {
    std::ostringstream d;
    d << "total TP rasl=" << tp("total", Logic::RASL) << " itl=" << tp("total", Logic::ITL)
      << " ltl=" << tp("total", Logic::LTL) << " prop=" << tp("total", Logic::Prop);
    assert_that("detection-hierarchy-strict",
                tp("total", Logic::RASL) > tp("total", Logic::ITL) &&
                    tp("total", Logic::ITL) > tp("total", Logic::LTL) &&
                    tp("total", Logic::LTL) > tp("total", Logic::Prop),
                d.str());
  }
  assert_that("prop-zero-on-probing", tp("probing", Logic::Prop) == 0,
              "probing TP at prop = " + std::to_string(tp("probing", Logic::Prop)));
  assert_that("prop-zero-on-u2r", tp("u2r", Logic::Prop) == 0,
              "u2r TP at prop = " + std::to_string(tp("u2r", Logic::Prop)));
  assert_that("prop-positive-on-dos", tp("dos", Logic::Prop) > 0,
              "dos TP at prop = " + std::to_string(tp("dos", Logic::Prop)));
  assert_that("prop-r2l-entirely-sendmail",
              tp("r2l", Logic::Prop) > 0 &&
                  tp("r2l", Logic::Prop) == tp("sendmail", Logic::Prop),
              "r2l TP at prop = " + std::to_string(tp("r2l", Logic::Prop)) +
                  ", sendmail = " + std::to_string(tp("sendmail", Logic::Prop)));
  assert_that("u2r-itl-equals-rasl", tp("u2r", Logic::ITL) == tp("u2r", Logic::RASL),
              "u2r TP itl=" + std::to_string(tp("u2r", Logic::ITL)) +
                  " rasl=" + std::to_string(tp("u2r", Logic::RASL)));
  assert_that("ltl-at-least-twice-prop",
              tp("total", Logic::LTL) >= 2 * tp("total", Logic::Prop),
              "total TP ltl=" + std::to_string(tp("total", Logic::LTL)) +
                  " prop=" + std::to_string(tp("total", Logic::Prop)));
  {
    // cost ordering over the attacks expressible at ltl, itl and rasl alike
    std::uint64_t eval[4] = {0, 0, 0, 0};
    std::size_t scans[4] = {0, 0, 0, 0};
    for (AttackId a : kAllAttacks) {
      const BenchCell* l = detail::find_cell(report, attack_name(a), Logic::LTL);
      const BenchCell* i = detail::find_cell(report, attack_name(a), Logic::ITL);
      const BenchCell* r = detail::find_cell(report, attack_name(a), Logic::RASL);
      if (!l || !i || !r) continue;
      if (!l->records_scanned || !i->records_scanned || !r->records_scanned) continue;
      eval[1] += l->total_eval; scans[1] += l->records_scanned;
      eval[2] += i->total_eval; scans[2] += i->records_scanned;
      eval[3] += r->total_eval; scans[3] += r->records_scanned;
    }
    auto mean = [&](int idx) {
      return scans[idx] ? static_cast<double>(eval[idx]) / scans[idx] : 0.0;
    };
    std::ostringstream d;
    d << "mean eval_count rasl=" << mean(3) << " itl=" << mean(2) << " ltl=" << mean(1);
    if (report.short_circuit) d << " (short-circuit scan; ordering is contractual in "
                                   "exhaustive mode)";
    assert_that("cost-order-shared-attacks", mean(3) >= mean(2) && mean(2) >= mean(1),
                d.str());
  }
  {
    bool ok = !report.precision.empty();
    std::ostringstream d;
    for (const auto& p : report.precision) {
      ok = ok && p.rasl_false_positives == 0 && p.erased_itl_false_positives >= 1;
      d << attack_name(p.attack) << ": decoys=" << p.decoys
        << " rasl_fp=" << p.rasl_false_positives
        << " erased_itl_fp=" << p.erased_itl_false_positives << "; ";
    }
    if (report.precision.empty()) d << "no decoy records in the corpus";
    assert_that("decoy-precision-separation", ok, d.str());
  }
  if (!report.stress.empty()) {
    auto top2 = [&](bool rasl) {
      std::vector<std::pair<std::uint64_t, AttackId>> v;
      for (const auto& s : report.stress)
        v.push_back({rasl ? s.rasl_eval_count : s.itl_eval_count, s.attack});
      std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first > b.first; });
      bool ok = v.size() >= 2;
      if (ok) {
        auto is_probe = [](AttackId a) {
          return a == AttackId::ipsweep || a == AttackId::portscan;
        };
        ok = is_probe(v[0].second) && is_probe(v[1].second);
      }
      std::ostringstream d;
      for (std::size_t i = 0; i < v.size() && i < 4; ++i)
        d << attack_name(v[i].second) << "=" << v[i].first << " ";
      return std::pair<bool, std::string>(ok, d.str());
    };
    auto [ok_i, d_i] = top2(false);
    auto [ok_r, d_r] = top2(true);
    assert_that("stress-top2-itl", ok_i, d_i);
    assert_that("stress-top2-rasl", ok_r, d_r);
  }
  {
    bool sane = true;
    for (const auto& row : report.rows)
      sane = sane && std::isfinite(row.cell.mean_wall_micros) &&
             row.cell.mean_wall_micros >= 0.0;
    assert_that("wall-clock-sane", sane, "wall-clock columns finite and non-negative");
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV output: comment metadata, a header row, one row per (key, logic).
// Wall-clock columns are informational; every other column is
// seed-deterministic.
// ---------------------------------------------------------------------------

inline void write_csv(const BenchReport& report, std::ostream& out) {
  out << "# version=tlids-bench-1\n";
  out << "# seed=" << report.seed << "\n";
  out << "# corpus_manifest_hash=" << report.manifest_hash << "\n";
  out << "# short_circuit=" << (report.short_circuit ? "true" : "false") << "\n";
  out << "key,logic,records_scanned,true_positives,false_positives,tp_rate,fp_rate,"
         "mean_eval_count,mean_wall_micros,peak_memo_entries\n";
  for (const auto& row : report.rows) {
    const BenchCell& c = row.cell;
    out << row.key << ',' << logic_name(row.logic) << ',' << c.records_scanned << ','
        << c.true_positives << ',' << c.false_positives << ',' << format_number(c.tp_rate)
        << ',' << format_number(c.fp_rate) << ',' << format_number(c.mean_eval_count)
        << ',' << format_number(c.mean_wall_micros) << ',' << c.peak_memo_entries << '\n';
  }
}

inline void write_csv(const BenchReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write CSV: " + path.string());
  write_csv(report, out);
}

/// Human-readable summary: per-logic totals, the probe sections, and one
/// pass/fail line per comparison assertion.
inline void print_summary(const BenchReport& report, const ComparisonSummary& cmp,
                          std::ostream& out) {
  out << "benchmark summary (seed " << report.seed << ", "
      << (report.short_circuit ? "short-circuit" : "exhaustive") << " scans)\n";
  out << "  logic   records      TP      FP   mean_eval\n";
  for (Logic l : report.logics) {
    const BenchCell* c = detail::find_cell(report, "total", l);
    if (!c) continue;
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-6s %8zu %7zu %7zu %11.1f\n", logic_name(l),
                  c->records_scanned, c->true_positives, c->false_positives,
                  c->mean_eval_count);
    out << buf;
  }
  if (!report.precision.empty()) {
    out << "decoy precision (weakest faithful form vs time-erased form):\n";
    for (const auto& p : report.precision)
      out << "  " << attack_name(p.attack) << ": decoys " << p.decoys << ", rasl FP "
          << p.rasl_false_positives << ", erased-itl FP " << p.erased_itl_false_positives
          << "\n";
  }
  if (!report.stress.empty()) {
    out << "stress eval counts (40-event records, exhaustive):\n";
    for (const auto& s : report.stress)
      out << "  " << attack_name(s.attack) << ": itl " << s.itl_eval_count << ", rasl "
          << s.rasl_eval_count << "\n";
  }
  for (const auto& a : cmp.assertions)
    out << (a.pass ? "PASS " : "FAIL ") << a.name << ": " << a.detail << "\n";
  out << (cmp.all_pass ? "all comparison assertions hold\n"
                       : "comparison assertions FAILED\n");
}

}  // namespace tlids
