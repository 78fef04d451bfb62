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

// Command-line front end: parse/validate formulas, generate corpora, run
// single checks, run the comparative benchmark, export the signature
// library. Every code path is a thin wrapper over the library headers.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlids/bench.hpp"
#include "tlids/corpus.hpp"
#include "tlids/detector.hpp"
#include "tlids/expand.hpp"
#include "tlids/parser.hpp"
#include "tlids/signatures.hpp"

namespace {

using namespace tlids;

Logic parse_logic_flag(const std::string& s) {
  auto l = logic_from_name(s);
  if (!l) throw CLI::ValidationError("--logic", "expected one of prop, ltl, itl, rasl");
  return *l;
}

void apply_threshold_override(Thresholds& th, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw CLI::ValidationError("--threshold", "expected name=value");
  const std::string name = spec.substr(0, eq);
  const double value = std::strtod(spec.c_str() + eq + 1, nullptr);
  if (name == "pod.max_packet_bytes") th.pod_max_packet_bytes = value;
  else if (name == "apache.range_max") th.apache_range_max = value;
  else if (name == "sendmail.max_query_bytes") th.sendmail_max_query_bytes = value;
  else if (name == "mailbomb.gap_seconds") th.mailbomb_gap_seconds = value;
  else if (name == "ipsweep.window_seconds") th.ipsweep_window_seconds = value;
  else if (name == "portscan.window_seconds") th.portscan_window_seconds = value;
  else if (name == "xterm.window_max") th.xterm_window_max = value;
  else if (name == "imap.literal_value") th.imap_literal_value = value;
  else if (name == "httptunnel.port_lo") th.httptunnel_port_lo = value;
  else if (name == "httptunnel.port_hi") th.httptunnel_port_hi = value;
  else if (name == "httptunnel.mapped_port") th.httptunnel_mapped_port = value;
  else throw CLI::ValidationError("--threshold", "unknown threshold '" + name + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string describe_witness(const Scope& w) {
  std::ostringstream os;
  switch (w.kind) {
    case Scope::Kind::EventIdx: os << "event " << w.lo; break;
    case Scope::Kind::Position: os << "position " << w.lo; break;
    case Scope::Kind::Window: os << "interval [" << w.lo << ", " << w.hi << "]"; break;
  }
  return os.str();
}

int cmd_parse(const std::string& text, Logic logic) {
  Formula f = parse_formula(text, logic);
  std::cout << "parsed: " << format_formula(f) << "\n";
  std::cout << "core form (" << logic_name(logic)
            << "): " << format_formula(expand_derived(f, logic)) << "\n";
  return 0;
}

int cmd_check(const std::string& attack, const std::string& formula_text,
              const std::string& formula_file, bool weakened, Logic logic,
              const std::string& trace_path, bool exhaustive, const Thresholds& th) {
  Formula enc;
  if (!attack.empty()) {
    auto id = attack_from_name(attack);
    if (!id) throw std::runtime_error("unknown attack id '" + attack + "'");
    const auto sigs = build_signatures(th);
    const SignatureSet* sig = nullptr;
    for (const auto& s : sigs)
      if (s.attack == *id) sig = &s;
    if (weakened) {
      auto w = weaken(*sig, logic);
      if (!w)
        throw std::runtime_error("no documented weakened form of " + attack + " at " +
                                 logic_name(logic));
      enc = *w;
    } else if (auto it = sig->encodings.find(logic); it != sig->encodings.end()) {
      enc = it->second;
    } else {
      std::ostringstream os;
      os << attack << " has no encoding at " << logic_name(logic) << "; available:";
      for (const auto& [l, f] : sig->encodings) {
        (void)f;
        os << ' ' << logic_name(l);
      }
      os << " (try --weakened for the documented lossy form)";
      throw std::runtime_error(os.str());
    }
  } else if (!formula_file.empty()) {
    std::string body = read_file(formula_file);
    if (body.rfind("attack:", 0) == 0) {
      std::istringstream in(body);
      SignatureFile sf = parse_signature_file(in);
      enc = parse_formula(sf.formula_text, logic);
    } else {
      enc = parse_formula(body, logic);
    }
  } else if (!formula_text.empty()) {
    enc = parse_formula(formula_text, logic);
  } else {
    throw std::runtime_error("one of --attack, --formula, --formula-file is required");
  }

  Trace tr = load_trace(std::filesystem::path(trace_path));
  DetectionResult r = detect(tr, enc, logic,
                             exhaustive ? ScanMode::Exhaustive : ScanMode::ShortCircuit);
  if (r.detected) {
    std::cout << "detected, witness " << describe_witness(*r.witness) << "\n";
  } else {
    std::cout << "not detected\n";
  }
  std::cout << "eval_count " << r.stats.eval_count << ", memo_entries "
            << r.stats.memo_entries << "\n";
  return 0;
}

int cmd_generate(const std::string& out_dir, GenConfig cfg, const Thresholds& th) {
  Corpus corpus = generate_corpus(cfg, th);
  write_corpus(corpus, out_dir);
  std::size_t attacks = 0, benign = 0;
  for (const auto& r : corpus.records) (r.label ? attacks : benign)++;
  std::cout << "wrote " << corpus.records.size() << " records (" << attacks
            << " attack, " << benign << " benign) to " << out_dir << "\n";
  return 0;
}

int cmd_bench(const std::string& corpus_dir, const std::string& out_csv,
              const std::string& logics_flag, bool non_short_circuit, unsigned threads,
              bool no_timing, const Thresholds& th) {
  BenchOptions opts;
  opts.mode = non_short_circuit ? ScanMode::Exhaustive : ScanMode::ShortCircuit;
  opts.threads = threads;
  opts.timing_pass = !no_timing;
  if (!logics_flag.empty()) {
    opts.logics.clear();
    std::istringstream in(logics_flag);
    std::string item;
    while (std::getline(in, item, ','))
      opts.logics.push_back(parse_logic_flag(item));
  }
  LoadedCorpus corpus = load_corpus(corpus_dir);
  BenchReport report = run_bench(corpus, build_signatures(th), opts);
  if (!out_csv.empty()) write_csv(report, std::filesystem::path(out_csv));
  ComparisonSummary cmp = compare(report);
  print_summary(report, cmp, std::cout);
  return cmp.all_pass ? 0 : 1;
}

int cmd_export(const std::string& out_dir, const Thresholds& th) {
  export_signatures(out_dir, build_signatures(th));
  std::cout << "wrote signature files to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-trace temporal-logic intrusion detection workbench"};
  app.require_subcommand(1);

  std::vector<std::string> threshold_flags;
  app.add_option("--threshold", threshold_flags,
                 "override a named threshold (name=value), repeatable")
      ->take_all();

  std::string logic_flag = "rasl";
  std::string formula_text, formula_file, attack, trace_path;
  bool weakened = false, exhaustive = false;

  auto* parse_cmd = app.add_subcommand("parse", "parse a formula and print its core form");
  parse_cmd->add_option("--formula", formula_text, "formula text");
  parse_cmd->add_option("--file", formula_file, "file containing the formula");
  parse_cmd->add_option("--logic", logic_flag, "prop|ltl|itl|rasl")->capture_default_str();

  auto* check_cmd = app.add_subcommand("check", "run one encoding over one trace");
  check_cmd->add_option("--attack", attack, "built-in attack id");
  check_cmd->add_option("--formula", formula_text, "formula text");
  check_cmd->add_option("--formula-file", formula_file, "formula or signature file");
  check_cmd->add_flag("--weakened", weakened, "use the documented lossy form");
  check_cmd->add_option("--logic", logic_flag, "prop|ltl|itl|rasl")->capture_default_str();
  check_cmd->add_option("--trace", trace_path, "trace file (one JSON object per line)")
      ->required();
  check_cmd->add_flag("--exhaustive", exhaustive, "scan every scope, no short-circuit");

  std::string out_dir, corpus_dir, out_csv, counts_flag, logics_flag;
  GenConfig cfg;
  auto* gen_cmd = app.add_subcommand("generate", "synthesize a labeled corpus");
  gen_cmd->add_option("--out", out_dir, "output directory")->required();
  gen_cmd->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--counts", counts_flag,
                      "override per-attack counts: attack=count[,attack=count...]");
  gen_cmd->add_option("--variant-fraction", cfg.variant_fraction,
                      "fraction of each attack's records made discriminating")
      ->capture_default_str();
  gen_cmd->add_option("--benign", cfg.benign_count, "number of benign records")
      ->capture_default_str();
  gen_cmd->add_option("--decoys", cfg.decoys_per_attack, "decoys per timed attack")
      ->capture_default_str();
  gen_cmd->add_option("--noise-rate", cfg.noise_rate,
                      "mean interleaved benign events per attack record")
      ->capture_default_str();

  bool non_short_circuit = false, no_timing = false;
  unsigned threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "run the comparative benchmark");
  bench_cmd->add_option("--corpus", corpus_dir, "corpus directory")->required();
  bench_cmd->add_option("--out", out_csv, "output CSV path");
  bench_cmd->add_option("--logics", logics_flag, "comma-separated subset of the logics");
  bench_cmd->add_flag("--non-short-circuit", non_short_circuit,
                      "exhaustive scans for fair cost comparison");
  bench_cmd->add_option("--threads", threads,
                        "counting-pass threads (default: all cores; timing is 1)");
  bench_cmd->add_flag("--no-timing", no_timing, "skip the wall-clock pass");

  auto* export_cmd = app.add_subcommand("export-signatures", "write the signature files");
  export_cmd->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    Thresholds th;
    for (const auto& spec : threshold_flags) apply_threshold_override(th, spec);
    if (parse_cmd->parsed()) {
      std::string text = formula_text.empty() ? read_file(formula_file) : formula_text;
      if (text.empty()) throw std::runtime_error("--formula or --file is required");
      return cmd_parse(text, parse_logic_flag(logic_flag));
    }
    if (check_cmd->parsed())
      return cmd_check(attack, formula_text, formula_file, weakened,
                       parse_logic_flag(logic_flag), trace_path, exhaustive, th);
    if (gen_cmd->parsed()) {
      if (!counts_flag.empty()) {
        cfg.counts = default_counts();
        std::istringstream in(counts_flag);
        std::string item;
        while (std::getline(in, item, ',')) {
          auto eq = item.find('=');
          if (eq == std::string::npos)
            throw std::runtime_error("--counts expects attack=count pairs");
          auto id = attack_from_name(item.substr(0, eq));
          if (!id) throw std::runtime_error("unknown attack '" + item.substr(0, eq) + "'");
          cfg.counts[*id] = std::strtoull(item.c_str() + eq + 1, nullptr, 10);
        }
      }
      return cmd_generate(out_dir, cfg, th);
    }
    if (bench_cmd->parsed())
      return cmd_bench(corpus_dir, out_csv, logics_flag, non_short_circuit, threads,
                       no_timing, th);
    if (export_cmd->parsed()) return cmd_export(out_dir, th);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
