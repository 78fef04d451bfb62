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

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tlids/formula.hpp"
#include "tlids/parser.hpp"
#include "tlids/validate.hpp"

namespace tlids {

// ---------------------------------------------------------------------------
// The built-in attack library: 24 signatures across DOS / Probing / U2R /
// R2L, each with its weakest faithful logic, encodings at that logic and
// every stronger one, and documented lossy forms where they exist.
// ---------------------------------------------------------------------------

enum class AttackId {
  smurf, neptune, land, teardrop, pod, mailbomb, udpstorm, apache,
  ipsweep, portscan, nmap, satan, mscan,
  buffer_overflow, rootkit, httptunnel, xterm,
  warezmaster, warezclient, ftp_write, phf, imap, sendmail, xsnoop,
};

inline constexpr int kAttackCount = 24;

inline constexpr std::array<AttackId, kAttackCount> kAllAttacks = {
    AttackId::smurf,    AttackId::neptune,     AttackId::land,
    AttackId::teardrop, AttackId::pod,         AttackId::mailbomb,
    AttackId::udpstorm, AttackId::apache,      AttackId::ipsweep,
    AttackId::portscan, AttackId::nmap,        AttackId::satan,
    AttackId::mscan,    AttackId::buffer_overflow, AttackId::rootkit,
    AttackId::httptunnel, AttackId::xterm,     AttackId::warezmaster,
    AttackId::warezclient, AttackId::ftp_write, AttackId::phf,
    AttackId::imap,     AttackId::sendmail,    AttackId::xsnoop,
};

enum class Category { DOS, Probing, U2R, R2L };

inline const char* attack_name(AttackId a) {
  switch (a) {
    case AttackId::smurf: return "smurf";
    case AttackId::neptune: return "neptune";
    case AttackId::land: return "land";
    case AttackId::teardrop: return "teardrop";
    case AttackId::pod: return "pod";
    case AttackId::mailbomb: return "mailbomb";
    case AttackId::udpstorm: return "udpstorm";
    case AttackId::apache: return "apache";
    case AttackId::ipsweep: return "ipsweep";
    case AttackId::portscan: return "portscan";
    case AttackId::nmap: return "nmap";
    case AttackId::satan: return "satan";
    case AttackId::mscan: return "mscan";
    case AttackId::buffer_overflow: return "buffer_overflow";
    case AttackId::rootkit: return "rootkit";
    case AttackId::httptunnel: return "httptunnel";
    case AttackId::xterm: return "xterm";
    case AttackId::warezmaster: return "warezmaster";
    case AttackId::warezclient: return "warezclient";
    case AttackId::ftp_write: return "ftp_write";
    case AttackId::phf: return "phf";
    case AttackId::imap: return "imap";
    case AttackId::sendmail: return "sendmail";
    case AttackId::xsnoop: return "xsnoop";
  }
  return "?";
}

inline std::optional<AttackId> attack_from_name(const std::string& s) {
  for (AttackId a : kAllAttacks)
    if (s == attack_name(a)) return a;
  return std::nullopt;
}

inline const char* category_name(Category c) {
  switch (c) {
    case Category::DOS: return "dos";
    case Category::Probing: return "probing";
    case Category::U2R: return "u2r";
    case Category::R2L: return "r2l";
  }
  return "?";
}

inline Category attack_category(AttackId a) {
  switch (a) {
    case AttackId::smurf: case AttackId::neptune: case AttackId::land:
    case AttackId::teardrop: case AttackId::pod: case AttackId::mailbomb:
    case AttackId::udpstorm: case AttackId::apache:
      return Category::DOS;
    case AttackId::ipsweep: case AttackId::portscan: case AttackId::nmap:
    case AttackId::satan: case AttackId::mscan:
      return Category::Probing;
    case AttackId::buffer_overflow: case AttackId::rootkit:
    case AttackId::httptunnel: case AttackId::xterm:
      return Category::U2R;
    case AttackId::warezmaster: case AttackId::warezclient: case AttackId::ftp_write:
    case AttackId::phf: case AttackId::imap: case AttackId::sendmail:
    case AttackId::xsnoop:
      return Category::R2L;
  }
  return Category::DOS;
}

/// Benchmark-set population of each attack type.
inline std::size_t benchmark_count(AttackId a) {
  switch (a) {
    case AttackId::smurf: return 100;
    case AttackId::neptune: return 100;
    case AttackId::land: return 9;
    case AttackId::teardrop: return 12;
    case AttackId::pod: return 87;
    case AttackId::mailbomb: return 100;
    case AttackId::udpstorm: return 2;
    case AttackId::apache: return 100;
    case AttackId::ipsweep: return 100;
    case AttackId::portscan: return 100;
    case AttackId::nmap: return 84;
    case AttackId::satan: return 100;
    case AttackId::mscan: return 100;
    case AttackId::buffer_overflow: return 22;
    case AttackId::rootkit: return 13;
    case AttackId::httptunnel: return 100;
    case AttackId::xterm: return 13;
    case AttackId::warezmaster: return 100;
    case AttackId::warezclient: return 100;
    case AttackId::ftp_write: return 3;
    case AttackId::phf: return 2;
    case AttackId::imap: return 1;
    case AttackId::sendmail: return 17;
    case AttackId::xsnoop: return 4;
  }
  return 0;
}

/// Tunable constants with their units. Positive predicates fire strictly
/// beyond each bound; timed predicates compare strictly below.
struct Thresholds {
  double pod_max_packet_bytes = 65536;   // bytes
  double apache_range_max = 5;           // count
  double sendmail_max_query_bytes = 256; // bytes
  double mailbomb_gap_seconds = 0.01;    // seconds, per consecutive mail pair
  double ipsweep_window_seconds = 0.01;  // seconds, first probe to last
  double portscan_window_seconds = 0.01; // seconds, first probe to last
  double xterm_window_max = 65535;       // count
  double imap_literal_value = -1;        // count
  double httptunnel_port_lo = 1024;      // count
  double httptunnel_port_hi = 65535;     // count
  double httptunnel_mapped_port = 80;    // count
};

struct Threshold {
  std::string name;
  double value;
  std::string unit;  // seconds | bytes | count
};

/// One attack's signature material: category, weakest faithful logic,
/// per-logic encodings (the weakest logic and everything stronger; plus a
/// documented lossy form at a weaker logic where one exists), named
/// thresholds, and optionally a literal study form that is parseable and
/// evaluable but not used for detection.
struct SignatureSet {
  AttackId attack{};
  Category category{};
  Logic minimal_logic{};
  std::map<Logic, Formula> encodings;
  std::map<Logic, std::string> encoding_text;
  std::vector<Threshold> thresholds;
  std::optional<std::string> study_text;  // vacuous-as-written original form
  std::string weakening_note;             // what the documented lossy form misses
};

namespace detail {

inline std::string num(double v) { return format_number(v); }

inline void add_encoding(SignatureSet& s, Logic logic, const std::string& text) {
  Formula f = parse_formula(text, logic);
  s.encodings[logic] = f;
  s.encoding_text[logic] = text;
}

/// The same formula read conservatively at every logic above the weakest.
inline void add_conservative(SignatureSet& s, Logic from, const std::string& text) {
  for (int l = static_cast<int>(from); l <= static_cast<int>(Logic::RASL); ++l)
    add_encoding(s, static_cast<Logic>(l), text);
}

inline std::string chain10(const std::string& stem, const std::string& sep) {
  std::string out = "(";
  for (int i = 1; i <= 10; ++i) {
    if (i > 1) out += sep;
    out += stem + std::to_string(i);
  }
  out += ")";
  return out;
}

}  // namespace detail

/// Build the full 24-signature library for the given threshold values.
/// `nmap_tail` realizes the trailing "any other attack" conjunct of the
/// nmap chain; it defaults to constant true and may be configured to a
/// disjunction of other signatures.
inline std::vector<SignatureSet> build_signatures(const Thresholds& th = {},
                                                  const std::string& nmap_tail = "true") {
  using detail::add_conservative;
  using detail::add_encoding;
  using detail::num;
  std::vector<SignatureSet> out;
  out.reserve(kAttackCount);

  auto start = [&](AttackId a, Logic minimal) {
    SignatureSet s;
    s.attack = a;
    s.category = attack_category(a);
    s.minimal_logic = minimal;
    return s;
  };

  {  // smurf: no reply traffic from the target while echo floods arrive
    SignatureSet s = start(AttackId::smurf, Logic::ITL);
    add_conservative(s, Logic::ITL, "!attacked.send & (true ; attacked.recieve)*");
    add_encoding(s, Logic::LTL,
                 "!attacked.send & X (attacked.recieve & X (attacked.recieve & X "
                 "attacked.recieve))");
    s.weakening_note =
        "LTL form fixes one linear scenario (three back-to-back receives); floods "
        "interleaved with unrelated log entries are missed";
    out.push_back(std::move(s));
  }
  {  // neptune: SYN seen, SYNACK sent, the ACK never arrives
    SignatureSet s = start(AttackId::neptune, Logic::LTL);
    add_conservative(s, Logic::LTL,
                     "attacked.recieve.SYN & <> attacked.send.SYNACK & [] "
                     "!attacked.recieve.ACK");
    out.push_back(std::move(s));
  }
  {  // land: source and destination are both the victim
    SignatureSet s = start(AttackId::land, Logic::Prop);
    add_conservative(s, Logic::Prop, "attacked.recieve & land.p");
    out.push_back(std::move(s));
  }
  {  // teardrop: second fragment offset undercuts the first fragment's length
    SignatureSet s = start(AttackId::teardrop, Logic::LTL);
    add_conservative(s, Logic::LTL,
                     "let N := m1.TotalLength in m1.FragmentOffset = 0 & "
                     "m1.TotalLength = N & <> (m2.FragmentOffset < N)");
    out.push_back(std::move(s));
  }
  {  // pod: oversized reassembled packet
    SignatureSet s = start(AttackId::pod, Logic::Prop);
    add_conservative(s, Logic::Prop, "m.size > " + num(th.pod_max_packet_bytes));
    s.thresholds.push_back({"pod.max_packet_bytes", th.pod_max_packet_bytes, "bytes"});
    out.push_back(std::move(s));
  }
  {  // mailbomb: ten mails from one source, every consecutive gap under bound
    SignatureSet s = start(AttackId::mailbomb, Logic::RASL);
    const std::string sep = " ;[x < " + num(th.mailbomb_gap_seconds) + "] ";
    add_encoding(s, Logic::RASL, detail::chain10("mail.p", sep) + "*");
    s.thresholds.push_back({"mailbomb.gap_seconds", th.mailbomb_gap_seconds, "seconds"});
    s.weakening_note =
        "erasing the per-gap bounds leaves a plain mail chain that fires on any ten "
        "ordered mails regardless of pacing (slow legitimate batches included)";
    out.push_back(std::move(s));
  }
  {  // udpstorm: received datagram's port does not match the host's port
    SignatureSet s = start(AttackId::udpstorm, Logic::Prop);
    add_conservative(s, Logic::Prop,
                     "attacked.receive.udp & (forall i in here(sender): sender = i & "
                     "(let hp := attacked.port in i.udp.port != hp))");
    out.push_back(std::move(s));
  }
  {  // apache: ranged request beyond bound, or Accept-Encoding amplification
    SignatureSet s = start(AttackId::apache, Logic::Prop);
    add_conservative(s, Logic::Prop,
                     "apache.p & attacked.receive.http.range > " + num(th.apache_range_max) +
                         " | attacked.receive.http.accept-encoding = 1");
    s.thresholds.push_back({"apache.range_max", th.apache_range_max, "count"});
    out.push_back(std::move(s));
  }
  {  // ipsweep: ten probes to ten distinct hosts inside the time window
    SignatureSet s = start(AttackId::ipsweep, Logic::RASL);
    add_encoding(s, Logic::RASL, detail::chain10("ip.p", " ; ") + " & Tf < " +
                                     num(th.ipsweep_window_seconds));
    s.thresholds.push_back({"ipsweep.window_seconds", th.ipsweep_window_seconds, "seconds"});
    s.study_text = "!([] (" +
                   std::string("(ip.p1 ; ip.p2 ; ip.p3 ; ip.p4 ; ip.p5 ; ip.p6 ; ip.p7 ; "
                               "ip.p8 ; ip.p9)") +
                   " ;[x >= " + num(th.ipsweep_window_seconds) + "] ip.p10))";
    s.weakening_note =
        "erasing the window bound leaves a plain probe chain that fires on any ten "
        "distinct-destination probes however slow";
    out.push_back(std::move(s));
  }
  {  // portscan: ten SYNs to ten distinct ports inside the time window
    SignatureSet s = start(AttackId::portscan, Logic::RASL);
    add_encoding(s, Logic::RASL, detail::chain10("scan.q", " ; ") + " & Tf < " +
                                     num(th.portscan_window_seconds));
    s.thresholds.push_back(
        {"portscan.window_seconds", th.portscan_window_seconds, "seconds"});
    s.study_text = "!([] (" +
                   std::string("(scan.q1 ; scan.q2 ; scan.q3 ; scan.q4 ; scan.q5 ; "
                               "scan.q6 ; scan.q7 ; scan.q8 ; scan.q9)") +
                   " ;[x >= " + num(th.portscan_window_seconds) + "] scan.q10))";
    s.weakening_note =
        "erasing the window bound leaves a plain SYN chain that fires on any ten "
        "distinct-port probes however slow";
    out.push_back(std::move(s));
  }
  {  // nmap: discovery, scan, version detection, OS detection, in phases
    SignatureSet s = start(AttackId::nmap, Logic::ITL);
    const std::string phi1 =
        "(attacked.recieve.ICMP-echo-request | attacked.recieve.TCPSYN & port = 443 | "
        "attacked.recieve.TCPACK & port = 80 | attacked.recieve.ICMP-timestamp-request)";
    const std::string phi2 =
        "(attacked.recieve.SYN | attacked.recieve.ACK | attacked.recieve.TCPFIN | "
        "attacked.recieve.TCP.flags.FINURGPUSH = 1 | attacked.recieve.TCP.flags = 0 | "
        "attacked.port.UDP.recieve.ICMP)";
    const std::string ver_a =
        "(Exclusionlist.check.status.open | Exclusionlist.check.status.openfiltered)";
    const std::string ver_b = "(port.TCP.TCPconnect | port.UDP.recieve.nmapserviecesprobes)";
    const std::string phi3 = "(" + ver_a + " & <> " + ver_b + ")";
    const std::string phi4 =
        "((port.open.recieve.TCP | port.open.recieve.UDP | port.open.recieve.ICMP) & "
        "(port.closed.recieve.TCP | port.closed.recieve.UDP | port.closed.recieve.ICMP))";
    add_conservative(s, Logic::ITL,
                     "(" + phi1 + " ; " + phi2 + " ; " + phi3 + " ; " + phi4 + ") ; " +
                         nmap_tail);
    add_encoding(s, Logic::LTL, phi1 + " & X (" + phi2 + " & X (" + ver_a + " & X (" +
                                    ver_b + " & X " + phi4 + ")))");
    s.weakening_note =
        "LTL form fixes the five phases to five back-to-back log entries; scans with "
        "interleaved traffic are missed";
    out.push_back(std::move(s));
  }
  {  // satan: scan levels built from scanner sub-programs
    SignatureSet s = start(AttackId::satan, Logic::ITL);
    const std::string low =
        "(attacked.nslookuped_program | attacked.portmapped_program | "
        "attacked.portmapped_program & attacked.showmount_program)";
    const std::string services =
        "(attacked.fingered.scanned_program | attacked.TCP.scanned_program | "
        "attacked.UDP.scanned_program)";
    add_conservative(s, Logic::ITL,
                     "attacked.nslookuped_program | attacked.portmapped_program | "
                     "attacked.showmount_program | " +
                         low + " & " + services + " | " + low + " & " + services +
                         " & attacked.activeservices.scanned_program");
    s.weakening_note =
        "kept at ITL per its sub-program formulas, which abstract whole interval "
        "programs; no weaker form is documented";
    out.push_back(std::move(s));
  }
  {  // mscan: every step from some point on is one of the scan moves
    SignatureSet s = start(AttackId::mscan, Logic::LTL);
    add_conservative(
        s, Logic::LTL,
        "[] (attacked.receieve.SYN & port = 113 | attacked.receieve.SYN & port = 21 | "
        "attacked.receieve.SYN & port = 389 | attacked.receieve.SYN & port = 443 | "
        "attacked.receieve.TCP.flags.FINURGPUSH = 1 & port = 443 | "
        "attacked.receieve.TCP.flags = 0 & port = 443 | "
        "attacked.port.UDP.receive.ICMP & port = 971 | "
        "attacked.receieve.TCP.portmapper & port = 135 | "
        "attacked.receieve.nfsd.exportfs | "
        "attacked.receieve.samba | attacked.receieve.netbios | "
        "attacked.receieve.finger & port = 79 | "
        "(port.open.receive.TCP | port.open.receive.UCP | port.open.receive.ICMP) & "
        "(port.closed.receive.TCP | port.closed.receive.UCP | port.closed.ICMP))");
    out.push_back(std::move(s));
  }
  {  // buffer overflow: implanted string runs, or existing code is repurposed
    SignatureSet s = start(AttackId::buffer_overflow, Logic::ITL);
    add_conservative(s, Logic::ITL,
                     "attacked.recieve.string & string_program* | code.modified ; "
                     "code.execute_program*");
    add_encoding(s, Logic::LTL,
                 "attacked.recieve.string & X string_program | code.modified & X "
                 "code.execute_program");
    s.weakening_note =
        "LTL form demands the payload to run in the very next log entry; staged "
        "executions are missed";
    out.push_back(std::move(s));
  }
  {  // rootkit: monitoring tools replaced, then the system log doctored
    SignatureSet s = start(AttackId::rootkit, Logic::ITL);
    add_conservative(s, Logic::ITL,
                     "code.modified_program ; (syslog.modified_program | "
                     "syslog.delete_program)");
    add_encoding(s, Logic::LTL,
                 "code.modified_program & X (syslog.modified_program | "
                 "syslog.delete_program)");
    s.weakening_note =
        "LTL form requires the log cleanup immediately after the tool swap; delayed "
        "cleanup is missed";
    out.push_back(std::move(s));
  }
  {  // httptunnel: client relay up, high ports all mapped to 80, request sent
    SignatureSet s = start(AttackId::httptunnel, Logic::LTL);
    add_conservative(s, Logic::LTL,
                     "client.htc & (forall i in obs(src.port, " +
                         num(th.httptunnel_port_lo) + ", " + num(th.httptunnel_port_hi) +
                         "): [] (src.port = i -> mapped.port = " +
                         num(th.httptunnel_mapped_port) + ")) & <> client.send.http");
    s.thresholds.push_back({"httptunnel.port_lo", th.httptunnel_port_lo, "count"});
    s.thresholds.push_back({"httptunnel.port_hi", th.httptunnel_port_hi, "count"});
    s.thresholds.push_back({"httptunnel.mapped_port", th.httptunnel_mapped_port, "count"});
    out.push_back(std::move(s));
  }
  {  // xterm: a run of terminal-abuse moves
    SignatureSet s = start(AttackId::xterm, Logic::ITL);
    const std::string moves =
        "Attack.receive.escape & xterm.window > " + num(th.xterm_window_max) +
        " | Banner.modifed.FTP | Banner.modifed.TELNET | Syslog.modifed | "
        "Syslog.Symlinked | xterm.p";
    add_conservative(s, Logic::ITL, "(" + moves + ")*");
    add_encoding(s, Logic::LTL, "(" + moves + ") & X (" + moves + ")");
    s.thresholds.push_back({"xterm.window_max", th.xterm_window_max, "count"});
    s.weakening_note =
        "LTL form requires two back-to-back abuse moves; runs diluted by other "
        "entries are missed";
    out.push_back(std::move(s));
  }
  {  // warezmaster: guest login, hidden directory, upload
    SignatureSet s = start(AttackId::warezmaster, Logic::ITL);
    add_conservative(s, Logic::ITL,
                     "account.guest.login_program ; hiddendirectory.created_program ; "
                     "uploadwarez_program");
    add_encoding(s, Logic::LTL,
                 "account.guest.login_program & X (hiddendirectory.created_program & X "
                 "uploadwarez_program)");
    s.weakening_note =
        "LTL form fixes the three stages to three back-to-back entries; paced "
        "sessions are missed";
    out.push_back(std::move(s));
  }
  {  // warezclient: a warezmaster session followed by the download
    SignatureSet s = start(AttackId::warezclient, Logic::ITL);
    add_conservative(s, Logic::ITL,
                     "account.guest.login_program ; hiddendirectory.created_program ; "
                     "uploadwarez_program ; downloadwarez_program");
    add_encoding(s, Logic::LTL,
                 "account.guest.login_program & X (hiddendirectory.created_program & X "
                 "(uploadwarez_program & X downloadwarez_program))");
    s.weakening_note =
        "LTL form fixes the four stages to four back-to-back entries; paced sessions "
        "are missed";
    out.push_back(std::move(s));
  }
  {  // ftp_write: forged .rhosts appears, rlogin follows
    SignatureSet s = start(AttackId::ftp_write, Logic::ITL);
    add_conservative(s, Logic::ITL,
                     "attacked.create.file & file.p = \"rhosts\" & <> "
                     "attacked.open.rlogin");
    add_encoding(s, Logic::LTL,
                 "attacked.create.file & file.p = \"rhosts\" & X attacked.open.rlogin");
    s.study_text =
        "(attacked.create.file & file.p = \"rhosts\" -> <> attacked.open.rlogin)*";
    s.weakening_note =
        "LTL form requires the rlogin right after the file drop; delayed logins are "
        "missed. The starred implication form is vacuous on any interval not opening "
        "with the file drop and is kept for study only";
    out.push_back(std::move(s));
  }
  {  // phf: crafted request, then xterm and the two reverse telnets
    SignatureSet s = start(AttackId::phf, Logic::ITL);
    add_conservative(s, Logic::ITL,
                     "Attacked.receive.http & phf.p & X (attacked.xterm ; "
                     "attacked.telnet & telnet.port = 25 ; attacked.telnet & "
                     "telnet.port = 90)");
    add_encoding(s, Logic::LTL,
                 "Attacked.receive.http & phf.p & X (attacked.xterm & X "
                 "(attacked.telnet & telnet.port = 25 & X (attacked.telnet & "
                 "telnet.port = 90)))");
    s.weakening_note =
        "LTL form requires the telnet pair immediately after the xterm; delayed "
        "connections are missed";
    out.push_back(std::move(s));
  }
  {  // imap: literal set to -1, then completion, allocation, memory fault
    SignatureSet s = start(AttackId::imap, Logic::ITL);
    add_conservative(s, Logic::ITL, "literal.value = " + num(th.imap_literal_value) +
                                        " & X (imap.f ; imap.g ; imap.p)");
    add_encoding(s, Logic::LTL, "literal.value = " + num(th.imap_literal_value) +
                                    " & X (imap.f & X (imap.g & X imap.p))");
    s.thresholds.push_back({"imap.literal_value", th.imap_literal_value, "count"});
    s.weakening_note =
        "LTL form requires the three fault stages back to back; interleaved entries "
        "are missed";
    out.push_back(std::move(s));
  }
  {  // sendmail: oversized query
    SignatureSet s = start(AttackId::sendmail, Logic::Prop);
    add_conservative(s, Logic::Prop,
                     "Attacked.receive.size > " + num(th.sendmail_max_query_bytes));
    s.thresholds.push_back(
        {"sendmail.max_query_bytes", th.sendmail_max_query_bytes, "bytes"});
    out.push_back(std::move(s));
  }
  {  // xsnoop: password capture immediately followed by exfiltration
    SignatureSet s = start(AttackId::xsnoop, Logic::LTL);
    add_conservative(s, Logic::LTL, "attacked.password.save & X attacked.send.login");
    out.push_back(std::move(s));
  }

  return out;
}

inline const std::vector<SignatureSet>& all_signatures() {
  static const std::vector<SignatureSet> sigs = build_signatures();
  return sigs;
}

inline const SignatureSet& signature(AttackId a) {
  for (const auto& s : all_signatures())
    if (s.attack == a) return s;
  throw std::logic_error("unknown attack id");
}

// ---------------------------------------------------------------------------
// Weakening.
// ---------------------------------------------------------------------------

/// Erase every elapsed-time constraint: timed chop becomes plain chop and
/// standalone elapsed comparisons become true (conjunctions with the
/// erased constraint are simplified away).
inline Formula erase_elapsed(const Formula& f) {
  if (!f) return f;
  switch (f->kind) {
    case NodeKind::ElapsedCmp:
      return f_true();
    case NodeKind::TimedChop:
      return f_chop(erase_elapsed(f->a), erase_elapsed(f->b));
    case NodeKind::And: {
      Formula a = erase_elapsed(f->a), b = erase_elapsed(f->b);
      if (is_const_true(a)) return b;
      if (is_const_true(b)) return a;
      return f_and(std::move(a), std::move(b));
    }
    case NodeKind::ForAllAttr:
      return f_forall(f->name, f->sel, erase_elapsed(f->a));
    case NodeKind::LetAttr:
      return f_let(f->name, f->attr, erase_elapsed(f->a));
    case NodeKind::Atom:
    case NodeKind::AttrCmp:
    case NodeKind::Skip:
      return f;
    default: {
      auto n = std::make_shared<Node>(*f);
      n->a = erase_elapsed(f->a);
      n->b = erase_elapsed(f->b);
      return n;
    }
  }
}

/// The documented lossy encoding of `s` at a strictly weaker logic, if one
/// exists. Dropping from RASL to ITL erases elapsed-time constraints (an
/// over-approximation); the ITL-to-LTL forms are the hand-written linear
/// scenarios stored in the library (under-approximations).
inline std::optional<Formula> weaken(const SignatureSet& s, Logic target) {
  if (static_cast<int>(target) >= static_cast<int>(s.minimal_logic))
    throw std::invalid_argument("weaken: target logic is not below the minimal logic");
  if (s.minimal_logic == Logic::RASL && target == Logic::ITL)
    return erase_elapsed(s.encodings.at(Logic::RASL));
  auto it = s.encodings.find(target);
  if (it != s.encodings.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proposition registry: one row per proposition or compared attribute
// used by the encodings, with the attack it belongs to and its reading.
// ---------------------------------------------------------------------------

struct RegistryEntry {
  AttackId attack;
  enum class Kind { Prop, Attr } kind;
  std::string name;
  std::string meaning;
};

inline const std::vector<RegistryEntry>& proposition_registry() {
  using K = RegistryEntry::Kind;
  static const std::vector<RegistryEntry> reg = [] {
    std::vector<RegistryEntry> r;
    auto add = [&](AttackId a, K k, const char* n, const char* m) {
      r.push_back(RegistryEntry{a, k, n, m});
    };
    // smurf
    add(AttackId::smurf, K::Prop, "attacked.send", "the attacked host sends a packet");
    add(AttackId::smurf, K::Prop, "attacked.recieve", "the attacked host receives a packet");
    // neptune
    add(AttackId::neptune, K::Prop, "attacked.recieve.SYN",
        "the attacked host receives a SYN packet");
    add(AttackId::neptune, K::Prop, "attacked.send.SYNACK",
        "the attacked host replies a SYNACK packet");
    add(AttackId::neptune, K::Prop, "attacked.recieve.ACK",
        "the attacked host receives an ACK packet");
    // land
    add(AttackId::land, K::Prop, "attacked.recieve", "the attacked host receives a packet");
    add(AttackId::land, K::Prop, "land.p",
        "source and destination address are both the attacked host address");
    // teardrop
    add(AttackId::teardrop, K::Attr, "m1.FragmentOffset",
        "fragment offset of received packet 1");
    add(AttackId::teardrop, K::Attr, "m1.TotalLength", "total length of received packet 1");
    add(AttackId::teardrop, K::Attr, "m2.FragmentOffset",
        "fragment offset of received packet 2");
    // pod
    add(AttackId::pod, K::Attr, "m.size", "size of the received packet in bytes");
    // mailbomb
    for (int i = 1; i <= 10; ++i)
      add(AttackId::mailbomb, K::Prop, ("mail.p" + std::to_string(i)).c_str(),
          "the target host receives the i-th mail of a run from one source");
    // udpstorm
    add(AttackId::udpstorm, K::Prop, "attacked.receive.udp",
        "the target host receives a UDP packet from a host in the subnet");
    add(AttackId::udpstorm, K::Attr, "sender", "which subnet host sent the packet");
    add(AttackId::udpstorm, K::Attr, "i.udp.port", "port number carried by the packet");
    add(AttackId::udpstorm, K::Attr, "attacked.port", "port number of the target host");
    // apache
    add(AttackId::apache, K::Prop, "apache.p", "the target host receives an HTTP request");
    add(AttackId::apache, K::Attr, "attacked.receive.http.range",
        "Range field of that request");
    add(AttackId::apache, K::Attr, "attacked.receive.http.accept-encoding",
        "Accept-Encoding field of that request");
    // ipsweep / portscan
    for (int i = 1; i <= 10; ++i)
      add(AttackId::ipsweep, K::Prop, ("ip.p" + std::to_string(i)).c_str(),
          "the event denoted by the i-th probe record");
    for (int i = 1; i <= 10; ++i)
      add(AttackId::portscan, K::Prop, ("scan.q" + std::to_string(i)).c_str(),
          "the event denoted by the i-th probe record");
    // nmap
    add(AttackId::nmap, K::Prop, "attacked.recieve.ICMP-echo-request", "host discovery probe");
    add(AttackId::nmap, K::Prop, "attacked.recieve.TCPSYN", "host discovery SYN to 443");
    add(AttackId::nmap, K::Prop, "attacked.recieve.TCPACK", "host discovery ACK to 80");
    add(AttackId::nmap, K::Prop, "attacked.recieve.ICMP-timestamp-request",
        "host discovery timestamp probe");
    add(AttackId::nmap, K::Prop, "attacked.recieve.SYN", "TCP SYN scanning");
    add(AttackId::nmap, K::Prop, "attacked.recieve.ACK", "TCP ACK scanning");
    add(AttackId::nmap, K::Prop, "attacked.recieve.TCPFIN", "TCP FIN scanning");
    add(AttackId::nmap, K::Attr, "attacked.recieve.TCP.flags.FINURGPUSH",
        "TCP Xmas scanning flag set");
    add(AttackId::nmap, K::Attr, "attacked.recieve.TCP.flags", "TCP NULL scanning flags");
    add(AttackId::nmap, K::Prop, "attacked.port.UDP.recieve.ICMP", "UDP scanning reply");
    add(AttackId::nmap, K::Attr, "port", "destination port of the probe");
    add(AttackId::nmap, K::Prop, "Exclusionlist.check.status.open",
        "open port checked against the exclusion list");
    add(AttackId::nmap, K::Prop, "Exclusionlist.check.status.openfiltered",
        "open|filtered port checked against the exclusion list");
    add(AttackId::nmap, K::Prop, "port.TCP.TCPconnect", "TCP connect attempt on the port");
    add(AttackId::nmap, K::Prop, "port.UDP.recieve.nmapserviecesprobes",
        "service-probe payload match on the UDP port");
    add(AttackId::nmap, K::Prop, "port.open.recieve.TCP", "TCP packet to an open port");
    add(AttackId::nmap, K::Prop, "port.open.recieve.UDP", "UDP packet to an open port");
    add(AttackId::nmap, K::Prop, "port.open.recieve.ICMP", "ICMP packet to an open port");
    add(AttackId::nmap, K::Prop, "port.closed.recieve.TCP", "TCP packet to a closed port");
    add(AttackId::nmap, K::Prop, "port.closed.recieve.UDP", "UDP packet to a closed port");
    add(AttackId::nmap, K::Prop, "port.closed.recieve.ICMP", "ICMP packet to a closed port");
    // satan
    add(AttackId::satan, K::Prop, "attacked.nslookuped_program", "name-server lookup scan");
    add(AttackId::satan, K::Prop, "attacked.portmapped_program", "portmap scan");
    add(AttackId::satan, K::Prop, "attacked.showmount_program", "showmount scan");
    add(AttackId::satan, K::Prop, "attacked.fingered.scanned_program", "finger scan");
    add(AttackId::satan, K::Prop, "attacked.TCP.scanned_program", "TCP service scan");
    add(AttackId::satan, K::Prop, "attacked.UDP.scanned_program", "UDP service scan");
    add(AttackId::satan, K::Prop, "attacked.activeservices.scanned_program",
        "active-services scan");
    // mscan
    add(AttackId::mscan, K::Prop, "attacked.receieve.SYN", "SYN probe");
    add(AttackId::mscan, K::Attr, "attacked.receieve.TCP.flags.FINURGPUSH",
        "Xmas probe flag set");
    add(AttackId::mscan, K::Attr, "attacked.receieve.TCP.flags", "NULL probe flags");
    add(AttackId::mscan, K::Prop, "attacked.port.UDP.receive.ICMP", "UDP probe reply");
    add(AttackId::mscan, K::Prop, "attacked.receieve.TCP.portmapper", "portmapper query");
    add(AttackId::mscan, K::Prop, "attacked.receieve.nfsd.exportfs", "NFSD export query");
    add(AttackId::mscan, K::Prop, "attacked.receieve.samba", "samba share query");
    add(AttackId::mscan, K::Prop, "attacked.receieve.netbios", "netbios share query");
    add(AttackId::mscan, K::Prop, "attacked.receieve.finger", "finger query");
    add(AttackId::mscan, K::Attr, "port", "destination port of the probe");
    add(AttackId::mscan, K::Prop, "port.open.receive.TCP", "TCP packet to an open port");
    add(AttackId::mscan, K::Prop, "port.open.receive.UCP", "UDP packet to an open port");
    add(AttackId::mscan, K::Prop, "port.open.receive.ICMP", "ICMP packet to an open port");
    add(AttackId::mscan, K::Prop, "port.closed.receive.TCP", "TCP packet to a closed port");
    add(AttackId::mscan, K::Prop, "port.closed.receive.UCP", "UDP packet to a closed port");
    add(AttackId::mscan, K::Prop, "port.closed.ICMP", "ICMP packet to a closed port");
    // buffer overflow
    add(AttackId::buffer_overflow, K::Prop, "attacked.recieve.string",
        "the attacked host receives the payload string");
    add(AttackId::buffer_overflow, K::Prop, "code.modified",
        "parameters of existing code have been modified");
    add(AttackId::buffer_overflow, K::Prop, "string_program",
        "the received payload string runs");
    add(AttackId::buffer_overflow, K::Prop, "code.execute_program",
        "the modified code executes");
    // rootkit
    add(AttackId::rootkit, K::Prop, "code.modified_program",
        "system monitoring programs replaced");
    add(AttackId::rootkit, K::Prop, "syslog.modified_program", "system log modified");
    add(AttackId::rootkit, K::Prop, "syslog.delete_program", "system log deleted");
    // httptunnel
    add(AttackId::httptunnel, K::Prop, "client.htc", "the relay runs on the client host");
    add(AttackId::httptunnel, K::Attr, "src.port", "original port of an outbound packet");
    add(AttackId::httptunnel, K::Attr, "mapped.port",
        "port the packet is encapsulated onto");
    add(AttackId::httptunnel, K::Prop, "client.send.http",
        "the relay sends the encapsulated HTTP request outward");
    // xterm
    add(AttackId::xterm, K::Prop, "Attack.receive.escape",
        "escape command received resizing the window");
    add(AttackId::xterm, K::Attr, "xterm.window", "requested window bound");
    add(AttackId::xterm, K::Prop, "Banner.modifed.FTP", "banner modified over FTP");
    add(AttackId::xterm, K::Prop, "Banner.modifed.TELNET", "banner modified over TELNET");
    add(AttackId::xterm, K::Prop, "Syslog.modifed", "system log modified");
    add(AttackId::xterm, K::Prop, "Syslog.Symlinked",
        "symbolic link planted between the two log permissions");
    add(AttackId::xterm, K::Prop, "xterm.p", "the malicious loop escape code received");
    // warezmaster / warezclient
    add(AttackId::warezmaster, K::Prop, "account.guest.login_program",
        "guest-account login session");
    add(AttackId::warezmaster, K::Prop, "hiddendirectory.created_program",
        "hidden directory created");
    add(AttackId::warezmaster, K::Prop, "uploadwarez_program", "upload of the warez");
    add(AttackId::warezclient, K::Prop, "downloadwarez_program", "download of the warez");
    // ftp_write
    add(AttackId::ftp_write, K::Prop, "attacked.create.file",
        "new file created in the FTP home directory");
    add(AttackId::ftp_write, K::Attr, "file.p", "suffix of the new file");
    add(AttackId::ftp_write, K::Prop, "attacked.open.rlogin",
        "the FTP server opens an rlogin session");
    // phf
    add(AttackId::phf, K::Prop, "Attacked.receive.http",
        "the target server receives the HTTP request");
    add(AttackId::phf, K::Prop, "phf.p", "the request carries the newline 0x0a escape");
    add(AttackId::phf, K::Prop, "attacked.xterm", "the target server runs an xterm command");
    add(AttackId::phf, K::Prop, "attacked.telnet", "reverse telnet connection created");
    add(AttackId::phf, K::Attr, "telnet.port", "port of the reverse telnet connection");
    // imap
    add(AttackId::imap, K::Attr, "literal.value", "value of the received literal field");
    add(AttackId::imap, K::Prop, "imap.f", "the target host completes the operation");
    add(AttackId::imap, K::Prop, "imap.g", "the target host allocates memory");
    add(AttackId::imap, K::Prop, "imap.p", "a memory error occurs on the target host");
    // sendmail
    add(AttackId::sendmail, K::Attr, "Attacked.receive.size",
        "size of the received mail query in bytes");
    // xsnoop
    add(AttackId::xsnoop, K::Prop, "attacked.password.save",
        "captured keyboard passwords stored into the local log");
    add(AttackId::xsnoop, K::Prop, "attacked.send.login",
        "the stored log with passwords sent to the attacker");
    return r;
  }();
  return reg;
}

// ---------------------------------------------------------------------------
// Signature files: a three-line header then the formula text.
// ---------------------------------------------------------------------------

struct SignatureFile {
  std::string attack;
  Logic logic = Logic::Prop;
  std::string thresholds;
  std::string formula_text;
};

inline std::string render_signature_file(const SignatureSet& s, Logic logic) {
  std::ostringstream os;
  os << "attack: " << attack_name(s.attack) << "\n";
  os << "logic: " << logic_name(logic) << "\n";
  os << "thresholds:";
  for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
    os << (i ? "," : " ") << s.thresholds[i].name << '=' << format_number(s.thresholds[i].value)
       << '(' << s.thresholds[i].unit << ')';
  }
  os << "\n\n" << s.encoding_text.at(logic) << "\n";
  return os.str();
}

inline SignatureFile parse_signature_file(std::istream& in) {
  SignatureFile out;
  std::string line;
  int header_lines = 0;
  while (std::getline(in, line)) {
    if (line.rfind("attack:", 0) == 0) {
      out.attack = line.substr(7);
    } else if (line.rfind("logic:", 0) == 0) {
      std::string l = line.substr(6);
      l.erase(0, l.find_first_not_of(' '));
      auto logic = logic_from_name(l);
      if (!logic) throw FormulaError("signature file: unknown logic '" + l + "'");
      out.logic = *logic;
    } else if (line.rfind("thresholds:", 0) == 0) {
      out.thresholds = line.substr(11);
    } else if (line.empty() && header_lines >= 2) {
      break;
    } else {
      throw FormulaError("signature file: unexpected header line '" + line + "'");
    }
    ++header_lines;
  }
  std::ostringstream body;
  while (std::getline(in, line)) body << line << ' ';
  out.formula_text = body.str();
  out.attack.erase(0, out.attack.find_first_not_of(' '));
  if (out.formula_text.find_first_not_of(' ') == std::string::npos)
    throw FormulaError("signature file: missing formula text");
  return out;
}

inline void export_signatures(const std::filesystem::path& dir,
                              const std::vector<SignatureSet>& sigs = all_signatures()) {
  std::filesystem::create_directories(dir);
  for (const auto& s : sigs) {
    for (const auto& [logic, text] : s.encoding_text) {
      std::filesystem::path p =
          dir / (std::string(attack_name(s.attack)) + "_" + logic_name(logic) + ".sig");
      std::ofstream out(p, std::ios::binary);
      out << render_signature_file(s, logic);
    }
  }
}

}  // namespace tlids
