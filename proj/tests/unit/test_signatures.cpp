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

#include <set>
#include <sstream>

#include "tlids/signatures.hpp"

using namespace tlids;

TEST_CASE("library shape: 24 attacks, categories 8/5/4/7") {
  const auto& sigs = all_signatures();
  REQUIRE(sigs.size() == 24);
  std::set<AttackId> seen;
  std::map<Category, int> cat;
  for (const auto& s : sigs) {
    CHECK(seen.insert(s.attack).second);
    ++cat[s.category];
  }
  CHECK(cat[Category::DOS] == 8);
  CHECK(cat[Category::Probing] == 5);
  CHECK(cat[Category::U2R] == 4);
  CHECK(cat[Category::R2L] == 7);
}

TEST_CASE("weakest-logic assignments and tally") {
  std::map<Logic, int> tally;
  for (const auto& s : all_signatures()) ++tally[s.minimal_logic];
  CHECK(tally[Logic::Prop] == 5);
  CHECK(tally[Logic::LTL] == 5);
  CHECK(tally[Logic::ITL] == 11);
  CHECK(tally[Logic::RASL] == 3);

  auto min = [](AttackId a) { return signature(a).minimal_logic; };
  CHECK(min(AttackId::land) == Logic::Prop);
  CHECK(min(AttackId::pod) == Logic::Prop);
  CHECK(min(AttackId::udpstorm) == Logic::Prop);
  CHECK(min(AttackId::apache) == Logic::Prop);
  CHECK(min(AttackId::sendmail) == Logic::Prop);
  CHECK(min(AttackId::neptune) == Logic::LTL);
  CHECK(min(AttackId::teardrop) == Logic::LTL);
  CHECK(min(AttackId::mscan) == Logic::LTL);
  CHECK(min(AttackId::httptunnel) == Logic::LTL);
  CHECK(min(AttackId::xsnoop) == Logic::LTL);
  CHECK(min(AttackId::mailbomb) == Logic::RASL);
  CHECK(min(AttackId::ipsweep) == Logic::RASL);
  CHECK(min(AttackId::portscan) == Logic::RASL);
  for (AttackId a : {AttackId::smurf, AttackId::nmap, AttackId::satan,
                     AttackId::buffer_overflow, AttackId::rootkit, AttackId::xterm,
                     AttackId::warezmaster, AttackId::warezclient, AttackId::ftp_write,
                     AttackId::phf, AttackId::imap})
    CHECK(min(a) == Logic::ITL);
}

TEST_CASE("benchmark-set counts") {
  CHECK(benchmark_count(AttackId::smurf) == 100);
  CHECK(benchmark_count(AttackId::land) == 9);
  CHECK(benchmark_count(AttackId::teardrop) == 12);
  CHECK(benchmark_count(AttackId::pod) == 87);
  CHECK(benchmark_count(AttackId::imap) == 1);
  CHECK(benchmark_count(AttackId::phf) == 2);
  CHECK(benchmark_count(AttackId::udpstorm) == 2);
  CHECK(benchmark_count(AttackId::ftp_write) == 3);
  CHECK(benchmark_count(AttackId::xsnoop) == 4);
  std::size_t total = 0;
  for (AttackId a : kAllAttacks) total += benchmark_count(a);
  CHECK(total == 1369);
}

TEST_CASE("every encoding validates at its logic and everything stronger") {
  for (const auto& s : all_signatures()) {
    REQUIRE(s.encodings.count(s.minimal_logic) == 1);
    for (const auto& [logic, f] : s.encodings) {
      INFO(attack_name(s.attack) << " at " << logic_name(logic));
      CHECK(valid_for(f, logic));
      for (int l = static_cast<int>(logic) + 1; l < 4; ++l)
        CHECK(valid_for(f, static_cast<Logic>(l)));
    }
    // encodings exist at the weakest logic and everything stronger
    for (int l = static_cast<int>(s.minimal_logic); l < 4; ++l)
      CHECK(s.encodings.count(static_cast<Logic>(l)) == 1);
  }
}

TEST_CASE("signature texts round trip") {
  for (const auto& s : all_signatures()) {
    for (const auto& [logic, text] : s.encoding_text) {
      INFO(attack_name(s.attack) << " at " << logic_name(logic) << ": " << text);
      Formula parsed = parse_formula(text, logic);
      CHECK(equals(parsed, s.encodings.at(logic)));
      Formula back = parse_formula_any(format_formula(parsed));
      CHECK(equals(parsed, back));
    }
    if (s.study_text) {
      Formula f = parse_formula_any(*s.study_text);
      CHECK(equals(f, parse_formula_any(format_formula(f))));
      CHECK(valid_for(f, Logic::RASL));
    }
  }
}

TEST_CASE("named thresholds carry the defaults and units") {
  CHECK(signature(AttackId::pod).encoding_text.at(Logic::Prop) == "m.size > 65536");
  auto find = [](AttackId a, const std::string& name) {
    for (const auto& t : signature(a).thresholds)
      if (t.name == name) return t;
    FAIL("missing threshold " + name);
    return Threshold{};
  };
  CHECK(find(AttackId::mailbomb, "mailbomb.gap_seconds").value == 0.01);
  CHECK(find(AttackId::mailbomb, "mailbomb.gap_seconds").unit == "seconds");
  CHECK(find(AttackId::apache, "apache.range_max").value == 5);
  CHECK(find(AttackId::sendmail, "sendmail.max_query_bytes").value == 256);
  CHECK(find(AttackId::xterm, "xterm.window_max").value == 65535);
  CHECK(find(AttackId::imap, "imap.literal_value").value == -1);
  CHECK(find(AttackId::httptunnel, "httptunnel.port_lo").value == 1024);
  CHECK(find(AttackId::httptunnel, "httptunnel.port_hi").value == 65535);
  CHECK(find(AttackId::httptunnel, "httptunnel.mapped_port").value == 80);

  Thresholds custom;
  custom.pod_max_packet_bytes = 9000;
  auto sigs = build_signatures(custom);
  for (const auto& s : sigs)
    if (s.attack == AttackId::pod)
      CHECK(s.encoding_text.at(Logic::Prop) == "m.size > 9000");
}

TEST_CASE("weakening") {
  const auto& mailbomb = signature(AttackId::mailbomb);
  auto erased = weaken(mailbomb, Logic::ITL);
  REQUIRE(erased.has_value());
  std::string text = format_formula(*erased);
  CHECK(text.find(";[") == std::string::npos);
  CHECK(text.find("mail.p10") != std::string::npos);
  CHECK(valid_for(*erased, Logic::ITL));
  CHECK_FALSE(weaken(mailbomb, Logic::LTL).has_value());

  const auto& ipsweep = signature(AttackId::ipsweep);
  auto ip_erased = weaken(ipsweep, Logic::ITL);
  REQUIRE(ip_erased.has_value());
  CHECK(format_formula(*ip_erased).find("Tf") == std::string::npos);

  // the hand-written linear scenarios are served for the ITL-level attacks
  auto smurf_ltl = weaken(signature(AttackId::smurf), Logic::LTL);
  REQUIRE(smurf_ltl.has_value());
  CHECK(equals(*smurf_ltl, signature(AttackId::smurf).encodings.at(Logic::LTL)));
  CHECK_FALSE(weaken(signature(AttackId::smurf), Logic::Prop).has_value());
  CHECK_FALSE(weaken(signature(AttackId::satan), Logic::LTL).has_value());

  CHECK_THROWS_AS(weaken(signature(AttackId::land), Logic::Prop), std::invalid_argument);
  CHECK_THROWS_AS(weaken(signature(AttackId::mailbomb), Logic::RASL), std::invalid_argument);
}

namespace {

void collect_names(const Formula& f, std::set<std::string>& props,
                   std::set<std::string>& attrs) {
  if (!f) return;
  if (f->kind == NodeKind::Atom && f->name != "true" && f->name != "false")
    props.insert(f->name);
  if (f->kind == NodeKind::AttrCmp) attrs.insert(f->name);
  if (f->kind == NodeKind::ForAllAttr) attrs.insert(f->sel.attr);
  if (f->kind == NodeKind::LetAttr) attrs.insert(f->attr);
  collect_names(f->a, props, attrs);
  collect_names(f->b, props, attrs);
}

}  // namespace

TEST_CASE("every encoding symbol appears in the proposition registry") {
  std::set<std::string> reg_props, reg_attrs;
  for (const auto& e : proposition_registry()) {
    (e.kind == RegistryEntry::Kind::Prop ? reg_props : reg_attrs).insert(e.name);
  }
  for (const auto& s : all_signatures()) {
    std::set<std::string> props, attrs;
    for (const auto& [logic, f] : s.encodings) collect_names(f, props, attrs);
    if (s.study_text) collect_names(parse_formula_any(*s.study_text), props, attrs);
    for (const auto& p : props) {
      INFO(attack_name(s.attack) << " proposition " << p);
      CHECK(reg_props.count(p) == 1);
    }
    for (const auto& a : attrs) {
      INFO(attack_name(s.attack) << " attribute " << a);
      CHECK(reg_attrs.count(a) == 1);
    }
  }
}

TEST_CASE("signature files render and parse") {
  const auto& s = signature(AttackId::mailbomb);
  std::string text = render_signature_file(s, Logic::RASL);
  std::istringstream in(text);
  SignatureFile file = parse_signature_file(in);
  CHECK(file.attack == "mailbomb");
  CHECK(file.logic == Logic::RASL);
  CHECK(file.thresholds.find("mailbomb.gap_seconds=0.01(seconds)") != std::string::npos);
  Formula f = parse_formula(file.formula_text, file.logic);
  CHECK(equals(f, s.encodings.at(Logic::RASL)));
}

TEST_CASE("export writes one file per attack and logic") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "tlids_sig_export_test";
  fs::remove_all(dir);
  export_signatures(dir);
  std::size_t expected = 0;
  for (const auto& s : all_signatures()) expected += s.encoding_text.size();
  std::size_t found = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++found;
    std::ifstream in(e.path());
    CHECK_NOTHROW(parse_signature_file(in));
  }
  CHECK(found == expected);
  fs::remove_all(dir);
}

TEST_CASE("the nmap tail is configurable") {
  auto sigs = build_signatures({}, "attacked.nslookuped_program");
  for (const auto& s : sigs)
    if (s.attack == AttackId::nmap)
      CHECK(s.encoding_text.at(Logic::ITL).find("attacked.nslookuped_program") !=
            std::string::npos);
}
