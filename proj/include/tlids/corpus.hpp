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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tlids/detector.hpp"
#include "tlids/naive.hpp"
#include "tlids/rng.hpp"
#include "tlids/signatures.hpp"
#include "tlids/trace.hpp"

namespace tlids {

inline constexpr const char* kCorpusVersion = "tlids-corpus-1";

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant { Canonical, Discriminating, Decoy, Benign };

/// One labeled behavior-trace segment.
struct Record {
  std::string id;
  std::optional<AttackId> label;    // empty = benign (decoys included)
  Variant variant = Variant::Benign;
  std::optional<Logic> target;      // discriminating: weaker logic it defeats
  std::optional<AttackId> mimics;   // decoy: attack whose lossy form it trips
  Trace trace{std::vector<Event>{make_event(0.0, {})}};
};

inline std::string variant_text(const Record& r) {
  switch (r.variant) {
    case Variant::Canonical: return "canonical";
    case Variant::Discriminating:
      return std::string("discriminating(") + logic_name(*r.target) + ")";
    case Variant::Decoy: return std::string("decoy(") + attack_name(*r.mimics) + ")";
    case Variant::Benign: return "benign-noise";
  }
  return "?";
}

struct GenConfig {
  std::uint64_t seed = 42;
  std::map<AttackId, std::size_t> counts;  // empty = benchmark-set defaults
  double variant_fraction = 0.30;
  std::size_t benign_count = 200;
  std::size_t decoys_per_attack = 2;
  double noise_rate = 3.0;  // mean interleaved benign events per attack record
};

inline std::map<AttackId, std::size_t> default_counts() {
  std::map<AttackId, std::size_t> m;
  for (AttackId a : kAllAttacks) m[a] = benchmark_count(a);
  return m;
}

struct Corpus {
  std::vector<Record> records;
  std::string manifest;
};

// ---------------------------------------------------------------------------
// Ordinal probe tagging. Probe events receive the ordinal propositions the
// timed signatures are written over:
//   - mail runs: mails from one source are numbered mail.p1..mail.p10
//     cyclically;
//   - sweep probes: echo requests from one source are numbered ip.p1..ip.p10
//     while destinations stay distinct; a repeated destination restarts the
//     run (so pinging one host never counts past 1);
//   - port probes: SYNs from one source to one host are numbered
//     scan.q1..scan.q10 while destination ports stay distinct.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string attr_text(const AttrValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return format_number(attr_as_double(v));
}

}  // namespace detail

inline void tag_probe_ordinals(std::vector<Event>& events) {
  std::map<std::string, int> mail_next;  // per source
  struct Run {
    std::vector<std::string> seen;
    int next = 1;
  };
  std::map<std::string, Run> sweeps;      // per source
  std::map<std::string, Run> portscans;   // per (source, destination)

  auto run_tag = [](Run& run, const std::string& key, const char* stem) {
    for (const auto& s : run.seen)
      if (s == key) {  // duplicate: restart the run at this probe
        run.seen.clear();
        run.next = 1;
        break;
      }
    run.seen.push_back(key);
    int ordinal = run.next++;
    if (ordinal == 10) {  // full window: the next probe starts a new run
      run.seen.clear();
      run.next = 1;
    }
    return std::string(stem) + std::to_string(ordinal);
  };

  for (Event& e : events) {
    if (e.has_prop("attacked.recieve.mail")) {
      const AttrValue* src = e.attr("src");
      std::string key = src ? detail::attr_text(*src) : std::string();
      int& next = mail_next.try_emplace(key, 1).first->second;
      e.props.push_back("mail.p" + std::to_string(next));
      next = next == 10 ? 1 : next + 1;
    } else if (e.has_prop("icmp.echo.request")) {
      const AttrValue* src = e.attr("src");
      const AttrValue* dst = e.attr("dst");
      if (dst) {
        Run& run = sweeps[src ? detail::attr_text(*src) : std::string()];
        e.props.push_back(run_tag(run, detail::attr_text(*dst), "ip.p"));
      }
    } else if (e.has_prop("tcp.syn")) {
      const AttrValue* src = e.attr("src");
      const AttrValue* dst = e.attr("dst");
      const AttrValue* port = e.attr("dst.port");
      if (port) {
        std::string key = (src ? detail::attr_text(*src) : std::string()) + "|" +
                          (dst ? detail::attr_text(*dst) : std::string());
        Run& run = portscans[key];
        e.props.push_back(run_tag(run, detail::attr_text(*port), "scan.q"));
      }
    }
    std::sort(e.props.begin(), e.props.end());
    e.props.erase(std::unique(e.props.begin(), e.props.end()), e.props.end());
  }
}

// ---------------------------------------------------------------------------
// Record synthesis.
// ---------------------------------------------------------------------------

namespace detail {

struct Step {
  std::vector<std::string> props;
  std::map<std::string, AttrValue> attrs;
  double gap_before = -1.0;  // <0: default pacing
};

struct Script {
  std::vector<Step> steps;
  // Slot i sits before step i; slot steps.size() trails the record.
  std::vector<std::size_t> noise_slots;     // where canonical noise may go
  std::vector<std::size_t> breaking_slots;  // where discriminating noise must go
  bool allow_noise = true;
};

inline const std::vector<std::string>& noise_alphabet() {
  static const std::vector<std::string> props = {
      "user.login",  "user.logout",     "disk.read", "disk.write",
      "net.flow.sample", "cron.tick",   "app.update.check", "sys.idle",
  };
  return props;
}

inline Step noise_step(SplitMix64& rng) {
  Step s;
  const auto& alpha = noise_alphabet();
  s.props.push_back(alpha[rng.uniform_int(0, alpha.size() - 1)]);
  if (rng.next_unit() < 0.4)
    s.attrs["bytes"] = rng.uniform_int(1, 9000);
  if (rng.next_unit() < 0.2)
    s.attrs["sessionid"] = "s" + std::to_string(rng.uniform_int(100, 999));
  return s;
}

inline std::vector<std::size_t> outside(std::size_t n) { return {0, n}; }

inline std::vector<std::size_t> interior(std::size_t n) {
  std::vector<std::size_t> v;
  for (std::size_t i = 1; i < n; ++i) v.push_back(i);
  return v;
}

/// The per-attack step scripts: each realizes the attack's critical steps
/// with randomized inessential choices and declares where benign noise may
/// (canonical) or must (discriminating) be placed.
inline Script attack_script(AttackId a, Variant variant, SplitMix64& rng,
                            const Thresholds& th) {
  Script sc;
  auto step = [&](std::vector<std::string> props,
                  std::map<std::string, AttrValue> attrs = {}) {
    Step s;
    s.props = std::move(props);
    s.attrs = std::move(attrs);
    sc.steps.push_back(std::move(s));
  };
  const bool decoy = variant == Variant::Decoy;
  switch (a) {
    case AttackId::smurf: {
      const int k = static_cast<int>(rng.uniform_int(4, 8));
      for (int i = 0; i < k; ++i) step({"attacked.recieve"});
      sc.noise_slots = outside(sc.steps.size());
      // discriminating placement is custom-built by the caller: receive
      // runs capped at two so no three land back to back
      break;
    }
    case AttackId::neptune: {
      step({"attacked.recieve.SYN"});
      step({"attacked.send.SYNACK"});
      if (rng.next_unit() < 0.5) step({"attacked.recieve.SYN"});
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    }
    case AttackId::land:
      step({"attacked.recieve", "land.p"});
      sc.allow_noise = false;
      break;
    case AttackId::teardrop: {
      const std::int64_t total = rng.uniform_int(256, 1400);
      step({}, {{"m1.FragmentOffset", std::int64_t{0}}, {"m1.TotalLength", total}});
      step({}, {{"m2.FragmentOffset", rng.uniform_int(1, total - 1)}});
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    }
    case AttackId::pod:
      step({"attacked.recieve"},
           {{"m.size", rng.uniform_int(static_cast<std::int64_t>(th.pod_max_packet_bytes) + 64,
                                       static_cast<std::int64_t>(th.pod_max_packet_bytes) * 2)}});
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    case AttackId::mailbomb: {
      for (int i = 0; i < 10; ++i) {
        Step s;
        s.props = {"attacked.recieve.mail"};
        s.attrs["src"] = std::string("mb1");
        s.gap_before = decoy ? th.mailbomb_gap_seconds * rng.uniform(50.0, 80.0)
                             : rng.uniform(0.1, 0.9) * th.mailbomb_gap_seconds;
        sc.steps.push_back(std::move(s));
      }
      sc.steps.front().gap_before = -1.0;
      sc.noise_slots = outside(sc.steps.size());
      break;
    }
    case AttackId::udpstorm: {
      const int k = static_cast<int>(rng.uniform_int(1, 2));
      for (int i = 0; i < k; ++i) {
        const std::int64_t host_port = 53;
        std::int64_t pkt_port = rng.uniform_int(1024, 65535);
        if (pkt_port == host_port) ++pkt_port;
        step({"attacked.receive.udp"},
             {{"sender", "h" + std::to_string(rng.uniform_int(2, 9))},
              {"i.udp.port", pkt_port},
              {"attacked.port", host_port}});
      }
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    }
    case AttackId::apache: {
      const int k = static_cast<int>(rng.uniform_int(1, 3));
      for (int i = 0; i < k; ++i)
        step({"apache.p"},
             {{"attacked.receive.http.range",
               rng.uniform_int(static_cast<std::int64_t>(th.apache_range_max) + 1, 20)},
              {"attacked.receive.http.accept-encoding", std::int64_t{1}}});
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    }
    case AttackId::ipsweep: {
      for (int i = 0; i < 10; ++i) {
        Step s;
        s.props = {"icmp.echo.request"};
        s.attrs["src"] = std::string("sw1");
        s.attrs["dst"] = "host" + std::to_string(i + 1);
        s.gap_before = decoy ? th.ipsweep_window_seconds * rng.uniform(50.0, 80.0)
                             : rng.uniform(0.1, 0.9) * th.ipsweep_window_seconds / 9.0;
        sc.steps.push_back(std::move(s));
      }
      sc.steps.front().gap_before = -1.0;
      sc.noise_slots = outside(sc.steps.size());
      break;
    }
    case AttackId::portscan: {
      for (int i = 0; i < 10; ++i) {
        Step s;
        s.props = {"tcp.syn"};
        s.attrs["src"] = std::string("ps1");
        s.attrs["dst"] = std::string("target");
        s.attrs["dst.port"] = std::int64_t{100 + i};
        s.gap_before = decoy ? th.portscan_window_seconds * rng.uniform(50.0, 80.0)
                             : rng.uniform(0.1, 0.9) * th.portscan_window_seconds / 9.0;
        sc.steps.push_back(std::move(s));
      }
      sc.steps.front().gap_before = -1.0;
      sc.noise_slots = outside(sc.steps.size());
      break;
    }
    case AttackId::nmap: {
      switch (rng.uniform_int(0, 3)) {
        case 0: step({"attacked.recieve.ICMP-echo-request"}); break;
        case 1: step({"attacked.recieve.TCPSYN"}, {{"port", std::int64_t{443}}}); break;
        case 2: step({"attacked.recieve.TCPACK"}, {{"port", std::int64_t{80}}}); break;
        default: step({"attacked.recieve.ICMP-timestamp-request"}); break;
      }
      switch (rng.uniform_int(0, 5)) {
        case 0: step({"attacked.recieve.SYN"}); break;
        case 1: step({"attacked.recieve.ACK"}); break;
        case 2: step({"attacked.recieve.TCPFIN"}); break;
        case 3: step({}, {{"attacked.recieve.TCP.flags.FINURGPUSH", std::int64_t{1}}}); break;
        case 4: step({}, {{"attacked.recieve.TCP.flags", std::int64_t{0}}}); break;
        default: step({"attacked.port.UDP.recieve.ICMP"}); break;
      }
      step({rng.next_unit() < 0.5 ? "Exclusionlist.check.status.open"
                                  : "Exclusionlist.check.status.openfiltered"});
      step({rng.next_unit() < 0.5 ? "port.TCP.TCPconnect"
                                  : "port.UDP.recieve.nmapserviecesprobes"});
      {
        const char* open_probe[] = {"port.open.recieve.TCP", "port.open.recieve.UDP",
                                    "port.open.recieve.ICMP"};
        const char* closed_probe[] = {"port.closed.recieve.TCP", "port.closed.recieve.UDP",
                                      "port.closed.recieve.ICMP"};
        step({open_probe[rng.uniform_int(0, 2)], closed_probe[rng.uniform_int(0, 2)]});
      }
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = interior(sc.steps.size());
      break;
    }
    case AttackId::satan: {
      const char* low[] = {"attacked.nslookuped_program", "attacked.portmapped_program",
                           "attacked.showmount_program"};
      step({low[rng.uniform_int(0, 2)]});
      if (rng.next_unit() < 0.6) {
        const char* svc[] = {"attacked.fingered.scanned_program",
                             "attacked.TCP.scanned_program",
                             "attacked.UDP.scanned_program"};
        step({svc[rng.uniform_int(0, 2)]});
        if (rng.next_unit() < 0.4) step({"attacked.activeservices.scanned_program"});
      }
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    }
    case AttackId::mscan: {
      const int k = static_cast<int>(rng.uniform_int(3, 6));
      for (int i = 0; i < k; ++i) {
        switch (rng.uniform_int(0, 11)) {
          case 0: step({"attacked.receieve.SYN"}, {{"port", std::int64_t{113}}}); break;
          case 1: step({"attacked.receieve.SYN"}, {{"port", std::int64_t{21}}}); break;
          case 2: step({"attacked.receieve.SYN"}, {{"port", std::int64_t{389}}}); break;
          case 3: step({"attacked.receieve.SYN"}, {{"port", std::int64_t{443}}}); break;
          case 4:
            step({}, {{"attacked.receieve.TCP.flags.FINURGPUSH", std::int64_t{1}},
                      {"port", std::int64_t{443}}});
            break;
          case 5:
            step({}, {{"attacked.receieve.TCP.flags", std::int64_t{0}},
                      {"port", std::int64_t{443}}});
            break;
          case 6:
            step({"attacked.port.UDP.receive.ICMP"}, {{"port", std::int64_t{971}}});
            break;
          case 7:
            step({"attacked.receieve.TCP.portmapper"}, {{"port", std::int64_t{135}}});
            break;
          case 8: step({"attacked.receieve.nfsd.exportfs"}); break;
          case 9:
            step({rng.next_unit() < 0.5 ? "attacked.receieve.samba"
                                        : "attacked.receieve.netbios"});
            break;
          case 10:
            step({"attacked.receieve.finger"}, {{"port", std::int64_t{79}}});
            break;
          default:
            step({"port.open.receive.TCP", "port.closed.receive.UCP"});
            break;
        }
      }
      sc.noise_slots = {0};  // the scan block must close the record
      break;
    }
    case AttackId::buffer_overflow: {
      if (rng.next_unit() < 0.5) {
        step({"attacked.recieve.string", "string_program"});
        step({"string_program"});
        if (rng.next_unit() < 0.5) step({"string_program"});
      } else {
        step({"code.modified"});
        step({"code.execute_program"});
        if (rng.next_unit() < 0.5) step({"code.execute_program"});
      }
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = {1};
      break;
    }
    case AttackId::rootkit:
      step({"code.modified_program"});
      step({rng.next_unit() < 0.5 ? "syslog.modified_program" : "syslog.delete_program"});
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = {1};
      break;
    case AttackId::httptunnel: {
      step({"client.htc"});
      const int pkts = static_cast<int>(rng.uniform_int(3, 5));
      for (int i = 0; i < pkts; ++i)
        step({"pkt.encapsulated"},
             {{"src.port", rng.uniform_int(static_cast<std::int64_t>(th.httptunnel_port_lo),
                                           static_cast<std::int64_t>(th.httptunnel_port_hi))},
              {"mapped.port", static_cast<std::int64_t>(th.httptunnel_mapped_port)}});
      step({"client.send.http"});
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    }
    case AttackId::xterm: {
      const int k = static_cast<int>(rng.uniform_int(2, 4));
      for (int i = 0; i < k; ++i) {
        switch (rng.uniform_int(0, 5)) {
          case 0:
            step({"Attack.receive.escape"},
                 {{"xterm.window",
                   rng.uniform_int(static_cast<std::int64_t>(th.xterm_window_max) + 1,
                                   200000)}});
            break;
          case 1: step({"Banner.modifed.FTP"}); break;
          case 2: step({"Banner.modifed.TELNET"}); break;
          case 3: step({"Syslog.modifed"}); break;
          case 4: step({"Syslog.Symlinked"}); break;
          default: step({"xterm.p"}); break;
        }
      }
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = interior(sc.steps.size());
      break;
    }
    case AttackId::warezmaster:
      step({"account.guest.login_program"});
      step({"hiddendirectory.created_program"});
      step({"uploadwarez_program"});
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = interior(sc.steps.size());
      break;
    case AttackId::warezclient:
      step({"account.guest.login_program"});
      step({"hiddendirectory.created_program"});
      step({"uploadwarez_program"});
      step({"downloadwarez_program"});
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = interior(sc.steps.size());
      break;
    case AttackId::ftp_write:
      step({"attacked.create.file"}, {{"file.p", std::string("rhosts")}});
      step({"attacked.open.rlogin"});
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = {1};
      break;
    case AttackId::phf:
      step({"Attacked.receive.http", "phf.p"});
      step({"attacked.xterm"});
      step({"attacked.telnet"}, {{"telnet.port", std::int64_t{25}}});
      step({"attacked.telnet"}, {{"telnet.port", std::int64_t{90}}});
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = {2, 3};  // slot 1 would break the strict-next edge
      break;
    case AttackId::imap:
      step({}, {{"literal.value", static_cast<std::int64_t>(th.imap_literal_value)}});
      step({"imap.f"});
      step({"imap.g"});
      step({"imap.p"});
      sc.noise_slots = outside(sc.steps.size());
      sc.breaking_slots = {2, 3};  // slot 1 would break the strict-next edge
      break;
    case AttackId::sendmail:
      step({}, {{"Attacked.receive.size",
                 rng.uniform_int(static_cast<std::int64_t>(th.sendmail_max_query_bytes) + 44,
                                 4096)}});
      for (std::size_t i = 0; i <= sc.steps.size(); ++i) sc.noise_slots.push_back(i);
      break;
    case AttackId::xsnoop:
      step({"attacked.password.save"});
      step({"attacked.send.login"});
      sc.noise_slots = outside(sc.steps.size());
      break;
  }
  return sc;
}

/// Assemble a script plus noise into a timed event list.
inline std::vector<Event> assemble(const Script& sc, Variant variant, double noise_rate,
                                   SplitMix64& rng) {
  // noise budget per slot
  std::map<std::size_t, std::vector<Step>> noise;
  if (sc.allow_noise) {
    int n = rng.poisson(noise_rate);
    if (variant == Variant::Discriminating) {
      // at least one breaking event; the rest goes to canonical-legal slots
      std::size_t slot = sc.breaking_slots[rng.uniform_int(0, sc.breaking_slots.size() - 1)];
      noise[slot].push_back(noise_step(rng));
    }
    for (int i = 0; i < n; ++i) {
      if (sc.noise_slots.empty()) break;
      std::size_t slot = sc.noise_slots[rng.uniform_int(0, sc.noise_slots.size() - 1)];
      noise[slot].push_back(noise_step(rng));
    }
  }
  std::vector<Event> events;
  double t = 0.0;
  bool first = true;
  auto emit = [&](const Step& s, bool is_noise) {
    if (!first) {
      double gap = (!is_noise && s.gap_before >= 0.0) ? s.gap_before
                                                      : rng.uniform(0.05, 0.3);
      t += gap;
    }
    first = false;
    std::vector<std::string> props = s.props;
    events.push_back(make_event(t, std::move(props),
                                std::map<std::string, AttrValue>(s.attrs)));
  };
  for (std::size_t i = 0; i < sc.steps.size(); ++i) {
    if (auto it = noise.find(i); it != noise.end())
      for (const Step& s : it->second) emit(s, true);
    emit(sc.steps[i], false);
  }
  if (auto it = noise.find(sc.steps.size()); it != noise.end())
    for (const Step& s : it->second) emit(s, true);
  // timestamps are rounded to microseconds for bit-stable serialization
  for (Event& e : events) e.t = std::round(e.t * 1e6) / 1e6;
  return events;
}

/// Discriminating smurf traces need receive runs capped at two events.
inline std::vector<Event> smurf_discriminating(SplitMix64& rng, double noise_rate) {
  const int receives = static_cast<int>(rng.uniform_int(4, 8));
  std::vector<Event> events;
  double t = 0.0;
  int run = 0;
  int emitted = 0;
  int budget = std::max(1, rng.poisson(noise_rate));
  while (emitted < receives) {
    if (run == 2 || (run >= 1 && rng.next_unit() < 0.3)) {
      Step s = noise_step(rng);
      events.push_back(make_event(t, s.props, std::map<std::string, AttrValue>(s.attrs)));
      --budget;
      run = 0;
    } else {
      events.push_back(make_event(t, {"attacked.recieve"}));
      ++run;
      ++emitted;
    }
    t += rng.uniform(0.05, 0.3);
  }
  while (budget-- > 0) {
    events.push_back(make_event(t, noise_step(rng).props));
    t += rng.uniform(0.05, 0.3);
  }
  for (Event& e : events) e.t = std::round(e.t * 1e6) / 1e6;
  return events;
}

inline std::vector<Event> benign_events(SplitMix64& rng) {
  const int n = static_cast<int>(rng.uniform_int(5, 40));
  std::vector<Event> events;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    Step s = noise_step(rng);
    events.push_back(make_event(t, s.props, std::map<std::string, AttrValue>(s.attrs)));
    t += rng.uniform(0.05, 0.5);
  }
  for (Event& e : events) e.t = std::round(e.t * 1e6) / 1e6;
  return events;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generation with built-in verification. Every record is checked against
// the library through the naive oracle before it is admitted:
//   canonical       fires every encoding the library lists for its attack;
//   discriminating  fires the weakest faithful encoding and everything
//                   stronger, and defeats the designated weaker encoding;
//   decoy           fires the time-erased form of the attack it mimics and
//                   no attack's weakest faithful encoding;
//   benign          fires no attack's weakest faithful encoding.
// ---------------------------------------------------------------------------

struct RecordPlan {
  std::optional<AttackId> attack;
  Variant variant = Variant::Benign;
  std::optional<Logic> target;
  std::optional<AttackId> mimics;
};

namespace detail {

inline bool verify_record(const Record& rec, const std::vector<SignatureSet>& sigs,
                          std::string* why) {
  auto fires = [&](const Formula& f, Logic logic) {
    return naive_detect(rec.trace, f, logic).has_value();
  };
  auto sig_of = [&](AttackId a) -> const SignatureSet& {
    for (const auto& s : sigs)
      if (s.attack == a) return s;
    throw std::logic_error("missing signature");
  };
  switch (rec.variant) {
    case Variant::Canonical: {
      const SignatureSet& s = sig_of(*rec.label);
      for (const auto& [logic, enc] : s.encodings)
        if (!fires(enc, logic)) {
          if (why) *why = std::string("canonical record misses the ") + logic_name(logic) +
                          " encoding";
          return false;
        }
      return true;
    }
    case Variant::Discriminating: {
      const SignatureSet& s = sig_of(*rec.label);
      for (const auto& [logic, enc] : s.encodings) {
        const bool expect = logic >= s.minimal_logic;
        if (fires(enc, logic) != expect) {
          if (why) *why = std::string("discriminating record ") +
                          (expect ? "misses the " : "fires the ") + logic_name(logic) +
                          " encoding";
          return false;
        }
      }
      return true;
    }
    case Variant::Decoy: {
      const SignatureSet& s = sig_of(*rec.mimics);
      auto lossy = weaken(s, Logic::ITL);
      if (!lossy || !fires(*lossy, Logic::ITL)) {
        if (why) *why = "decoy fails to trip the time-erased form";
        return false;
      }
      [[fallthrough]];
    }
    case Variant::Benign: {
      for (const auto& s : sigs)
        if (fires(s.encodings.at(s.minimal_logic), s.minimal_logic)) {
          if (why) *why = std::string("benign-labeled record fires ") + attack_name(s.attack);
          return false;
        }
      return true;
    }
  }
  return false;
}

inline Record generate_one(const RecordPlan& plan, std::uint64_t seed,
                           std::size_t record_index, double noise_rate,
                           const std::vector<SignatureSet>& sigs, const Thresholds& th) {
  std::string last_reason;
  for (int attempt = 0; attempt < 8; ++attempt) {
    SplitMix64 rng = SplitMix64::substream(seed, record_index * 16 + attempt);
    std::vector<Event> events;
    if (!plan.attack && plan.variant == Variant::Benign) {
      events = benign_events(rng);
    } else if (plan.variant == Variant::Discriminating && *plan.attack == AttackId::smurf) {
      events = smurf_discriminating(rng, noise_rate);
    } else {
      AttackId a = plan.attack ? *plan.attack : *plan.mimics;
      Script sc = attack_script(a, plan.variant, rng, th);
      events = assemble(sc, plan.variant, noise_rate, rng);
    }
    tag_probe_ordinals(events);
    Record rec;
    rec.label = plan.attack;
    rec.variant = plan.variant;
    rec.target = plan.target;
    rec.mimics = plan.mimics;
    rec.trace = Trace(std::move(events));
    if (verify_record(rec, sigs, &last_reason)) return rec;
  }
  std::string what = "record generation exhausted retries";
  if (plan.attack || plan.mimics)
    what += std::string(" for ") + attack_name(plan.attack ? *plan.attack : *plan.mimics);
  what += " (" + last_reason + "); the signature and generator disagree";
  throw CorpusError(what);
}

inline std::uint64_t fnv1a64(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// The deterministic record plan implied by a configuration: per attack,
/// round(count * (1 - variant_fraction)) canonical records and the rest
/// discriminating against the attack's documented weaker encoding (only
/// attacks with one admit discriminating records); per attack with an
/// over-approximating lossy form, decoys_per_attack benign-labeled decoys;
/// then benign_count pure-noise records.
inline std::vector<RecordPlan> plan_corpus(const GenConfig& cfg,
                                           const std::vector<SignatureSet>& sigs) {
  std::map<AttackId, std::size_t> counts = cfg.counts.empty() ? default_counts() : cfg.counts;
  std::vector<RecordPlan> plans;
  for (const SignatureSet& s : sigs) {
    auto it = counts.find(s.attack);
    const std::size_t count = it == counts.end() ? 0 : it->second;
    if (count == 0) continue;
    // the designated weaker encoding, when the library documents one that a
    // record can actually defeat (an under-approximating form)
    std::optional<Logic> target;
    for (const auto& [logic, enc] : s.encodings)
      if (logic < s.minimal_logic) target = logic;
    std::size_t canonical = count;
    std::size_t discriminating = 0;
    if (target) {
      canonical = static_cast<std::size_t>(
          std::llround(static_cast<double>(count) * (1.0 - cfg.variant_fraction)));
      if (canonical > count) canonical = count;
      discriminating = count - canonical;
    }
    for (std::size_t i = 0; i < canonical; ++i)
      plans.push_back(RecordPlan{s.attack, Variant::Canonical, {}, {}});
    for (std::size_t i = 0; i < discriminating; ++i)
      plans.push_back(RecordPlan{s.attack, Variant::Discriminating, target, {}});
  }
  for (const SignatureSet& s : sigs) {
    if (s.minimal_logic != Logic::RASL) continue;  // only over-approximations admit decoys
    auto it = counts.find(s.attack);
    if (it == counts.end() || it->second == 0) continue;
    for (std::size_t i = 0; i < cfg.decoys_per_attack; ++i)
      plans.push_back(RecordPlan{{}, Variant::Decoy, {}, s.attack});
  }
  for (std::size_t i = 0; i < cfg.benign_count; ++i)
    plans.push_back(RecordPlan{{}, Variant::Benign, {}, {}});
  return plans;
}

inline Corpus generate_corpus(const GenConfig& cfg, const Thresholds& th = {}) {
  const std::vector<SignatureSet> sigs = build_signatures(th);
  const std::vector<RecordPlan> plans = plan_corpus(cfg, sigs);
  Corpus corpus;
  corpus.records.reserve(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    Record rec = detail::generate_one(plans[i], cfg.seed, i, cfg.noise_rate, sigs, th);
    char id[16];
    std::snprintf(id, sizeof id, "r%05zu", i + 1);
    rec.id = id;
    corpus.records.push_back(std::move(rec));
  }

  std::map<AttackId, std::size_t> counts = cfg.counts.empty() ? default_counts() : cfg.counts;
  std::size_t attack_records = 0;
  for (const auto& r : corpus.records)
    if (r.label) ++attack_records;
  std::ostringstream m;
  m << "version=" << kCorpusVersion << "\n";
  m << "rng=" << kRngId << "\n";
  m << "seed=" << cfg.seed << "\n";
  m << "variant_fraction=" << format_number(cfg.variant_fraction) << "\n";
  m << "benign_count=" << cfg.benign_count << "\n";
  m << "decoys_per_attack=" << cfg.decoys_per_attack << "\n";
  m << "noise_rate=" << format_number(cfg.noise_rate) << "\n";
  m << "records=" << corpus.records.size() << "\n";
  m << "attack_records=" << attack_records << "\n";
  m << "note=synthetic step-oriented corpus; population per attack follows the "
       "benchmark-set counts\n";
  for (AttackId a : kAllAttacks)
    m << "count." << attack_name(a) << "=" << (counts.count(a) ? counts.at(a) : 0) << "\n";
  corpus.manifest = m.str();
  return corpus;
}

// ---------------------------------------------------------------------------
// Corpus directory layout: <dir>/<id>.jsonl (one trace per record),
// <dir>/labels (tab-separated id, label, variant), <dir>/manifest
// (key=value lines; content_hash covers every record file plus labels).
// ---------------------------------------------------------------------------

inline std::string labels_text(const Corpus& corpus) {
  std::ostringstream os;
  for (const auto& r : corpus.records)
    os << r.id << '\t' << (r.label ? attack_name(*r.label) : "benign") << '\t'
       << variant_text(r) << '\n';
  return os.str();
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& r : corpus.records) {
    std::ostringstream os;
    save_trace(r.trace, os);
    const std::string body = os.str();
    h = detail::fnv1a64(r.id + '\n', h);
    h = detail::fnv1a64(body, h);
    std::ofstream out(dir / (r.id + ".jsonl"), std::ios::binary);
    if (!out) throw CorpusError("cannot write record file " + r.id);
    out << body;
  }
  const std::string labels = labels_text(corpus);
  h = detail::fnv1a64(labels, h);
  {
    std::ofstream out(dir / "labels", std::ios::binary);
    out << labels;
  }
  {
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    std::ofstream out(dir / "manifest", std::ios::binary);
    out << corpus.manifest << "content_hash=fnv1a64:" << hex << "\n";
  }
}

struct LoadedCorpus {
  std::vector<Record> records;
  std::map<std::string, std::string> manifest;
  std::string manifest_hash;  // the stored content hash
};

inline LoadedCorpus load_corpus(const std::filesystem::path& dir) {
  LoadedCorpus out;
  std::ifstream mf(dir / "manifest");
  if (!mf) throw CorpusError("missing corpus manifest in " + dir.string());
  std::string line;
  while (std::getline(mf, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) out.manifest[line.substr(0, eq)] = line.substr(eq + 1);
  }
  std::ifstream lf(dir / "labels");
  if (!lf) throw CorpusError("missing corpus labels in " + dir.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::ostringstream labels_copy;
  while (std::getline(lf, line)) {
    labels_copy << line << '\n';
    std::istringstream ls(line);
    std::string id, label, variant;
    if (!std::getline(ls, id, '\t') || !std::getline(ls, label, '\t') ||
        !std::getline(ls, variant))
      throw CorpusError("malformed labels line: " + line);
    Record rec;
    rec.id = id;
    if (label != "benign") {
      auto a = attack_from_name(label);
      if (!a) throw CorpusError("unknown label '" + label + "'");
      rec.label = *a;
    }
    if (variant == "canonical") rec.variant = Variant::Canonical;
    else if (variant.rfind("discriminating(", 0) == 0) {
      rec.variant = Variant::Discriminating;
      auto logic = logic_from_name(variant.substr(15, variant.size() - 16));
      if (!logic) throw CorpusError("bad variant '" + variant + "'");
      rec.target = *logic;
    } else if (variant.rfind("decoy(", 0) == 0) {
      rec.variant = Variant::Decoy;
      auto a = attack_from_name(variant.substr(6, variant.size() - 7));
      if (!a) throw CorpusError("bad variant '" + variant + "'");
      rec.mimics = *a;
    } else rec.variant = Variant::Benign;
    const auto path = dir / (id + ".jsonl");
    if (!std::filesystem::exists(path))
      throw CorpusError("missing corpus record file " + path.string());
    std::ifstream rf(path, std::ios::binary);
    std::ostringstream body;
    body << rf.rdbuf();
    h = detail::fnv1a64(id + '\n', h);
    h = detail::fnv1a64(body.str(), h);
    std::istringstream in(body.str());
    rec.trace = load_trace(in);
    out.records.push_back(std::move(rec));
  }
  h = detail::fnv1a64(labels_copy.str(), h);
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  out.manifest_hash = std::string("fnv1a64:") + hex;
  auto it = out.manifest.find("content_hash");
  if (it == out.manifest.end())
    throw CorpusError("manifest lacks a content hash");
  if (it->second != out.manifest_hash)
    throw CorpusError("manifest hash mismatch: corpus files do not match the manifest");
  return out;
}

}  // namespace tlids
