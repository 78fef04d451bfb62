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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace tlids {

/// Attribute values are a closed union: every signature comparison is
/// either numeric or an equality test.
using AttrValue = std::variant<std::int64_t, double, std::string>;

inline bool attr_is_numeric(const AttrValue& v) {
  return !std::holds_alternative<std::string>(v);
}

inline double attr_as_double(const AttrValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

/// Total order used when iterating observed-value domains; keeps
/// quantifier expansion deterministic.
inline bool attr_value_less(const AttrValue& a, const AttrValue& b) {
  const bool an = attr_is_numeric(a), bn = attr_is_numeric(b);
  if (an != bn) return an;  // numbers before strings
  if (an) return attr_as_double(a) < attr_as_double(b);
  return std::get<std::string>(a) < std::get<std::string>(b);
}

inline bool attr_value_eq(const AttrValue& a, const AttrValue& b) {
  const bool an = attr_is_numeric(a), bn = attr_is_numeric(b);
  if (an != bn) return false;
  if (an) return attr_as_double(a) == attr_as_double(b);
  return std::get<std::string>(a) == std::get<std::string>(b);
}

/// Proposition names share the identifier grammar of the formula DSL:
/// they start with a letter or '_', continue with alphanumerics, '_',
/// '.' segments, and '-' joining letters (as in "ICMP-echo-request").
inline bool valid_prop_name(std::string_view s) {
  if (s.empty()) return false;
  if (s == "true" || s == "false" || s == "skip") return false;
  auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto body = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    char c = s[i];
    if (body(c)) continue;
    if ((c == '.' || c == '-') && i + 1 < s.size() && body(s[i + 1])) continue;
    return false;
  }
  return true;
}

/// One audit-log step: a timestamp, the atomic propositions that hold at
/// it, and typed attributes referenced by comparison predicates.
struct Event {
  double t = 0.0;
  std::vector<std::string> props;              // sorted, unique
  std::map<std::string, AttrValue> attrs;      // ordered => stable serialization

  bool has_prop(std::string_view name) const {
    return std::binary_search(props.begin(), props.end(), name);
  }

  const AttrValue* attr(const std::string& name) const {
    auto it = attrs.find(name);
    return it == attrs.end() ? nullptr : &it->second;
  }
};

inline Event make_event(double t, std::vector<std::string> props,
                        std::map<std::string, AttrValue> attrs = {}) {
  Event e;
  e.t = t;
  e.props = std::move(props);
  std::sort(e.props.begin(), e.props.end());
  e.props.erase(std::unique(e.props.begin(), e.props.end()), e.props.end());
  e.attrs = std::move(attrs);
  return e;
}

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable finite behavior trace. Non-empty, timestamps non-decreasing
/// (equal consecutive timestamps are allowed: simultaneous log entries).
class Trace {
 public:
  explicit Trace(std::vector<Event> events) : events_(std::move(events)) {
    if (events_.empty()) throw TraceError("trace must contain at least one event");
    for (std::size_t i = 0; i < events_.size(); ++i) {
      if (events_[i].t < 0.0)
        throw TraceError("negative timestamp at event " + std::to_string(i + 1));
      for (const auto& p : events_[i].props)
        if (!valid_prop_name(p))
          throw TraceError("invalid proposition name '" + p + "' at event " +
                           std::to_string(i + 1));
      if (i > 0 && events_[i].t < events_[i - 1].t) {
        std::ostringstream os;
        os << "decreasing timestamp at event " << (i + 1) << " (" << events_[i].t
           << " after " << events_[i - 1].t << ")";
        throw TraceError(os.str());
      }
    }
  }

  std::size_t size() const { return events_.size(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  const std::vector<Event>& events() const { return events_; }

 private:
  std::vector<Event> events_;
};

/// A view of trace positions [lo, hi], both inclusive. Equality is
/// positional. A point interval is lo == hi.
struct Interval {
  const Trace* trace = nullptr;
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t length() const { return hi - lo + 1; }
  bool is_point() const { return lo == hi; }
  const Event& first() const { return (*trace)[lo]; }
  const Event& last() const { return (*trace)[hi]; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.trace == b.trace && a.lo == b.lo && a.hi == b.hi;
  }
};

inline Interval subinterval(const Trace& tr, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi >= tr.size()) {
    std::ostringstream os;
    os << "subinterval [" << lo << ", " << hi << "] out of range for trace of length "
       << tr.size();
    throw std::out_of_range(os.str());
  }
  return Interval{&tr, lo, hi};
}

/// Subinterval of a subinterval, with indices relative to `iv`.
inline Interval subinterval(const Interval& iv, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi >= iv.length()) {
    std::ostringstream os;
    os << "subinterval [" << lo << ", " << hi << "] out of range for interval of length "
       << iv.length();
    throw std::out_of_range(os.str());
  }
  return Interval{iv.trace, iv.lo + lo, iv.lo + hi};
}

/// Elapsed time of an interval: timestamp of its last event minus the
/// first's. A point interval yields 0.
inline double elapsed(const Interval& iv) { return iv.last().t - iv.first().t; }

// ---------------------------------------------------------------------------
// Trace file format: one JSON object per line with exactly the fields
// `t` (number), `props` (array of strings), `attrs` (object of
// string -> number|string). Unknown or missing fields are errors so that
// corpora stay bit-stable.
// ---------------------------------------------------------------------------

inline Event parse_event_line(const std::string& line, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> Event {
    throw TraceError("line " + std::to_string(line_no) + ": " + what);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    return fail(std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) return fail("record is not an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "t" && k != "props" && k != "attrs") return fail("unknown field '" + k + "'");
  }
  if (!j.contains("t") || !j.contains("props") || !j.contains("attrs"))
    return fail("record must contain exactly the fields t, props, attrs");
  if (!j["t"].is_number()) return fail("field 't' must be a number");
  if (!j["props"].is_array()) return fail("field 'props' must be an array of strings");
  if (!j["attrs"].is_object()) return fail("field 'attrs' must be an object");

  Event e;
  e.t = j["t"].get<double>();
  if (e.t < 0.0) return fail("negative timestamp");
  for (const auto& p : j["props"]) {
    if (!p.is_string()) return fail("field 'props' must be an array of strings");
    std::string name = p.get<std::string>();
    if (!valid_prop_name(name)) return fail("invalid proposition name '" + name + "'");
    e.props.push_back(std::move(name));
  }
  std::sort(e.props.begin(), e.props.end());
  e.props.erase(std::unique(e.props.begin(), e.props.end()), e.props.end());
  for (auto it = j["attrs"].begin(); it != j["attrs"].end(); ++it) {
    const auto& v = it.value();
    if (v.is_string())
      e.attrs.emplace(it.key(), v.get<std::string>());
    else if (v.is_number_integer())
      e.attrs.emplace(it.key(), v.get<std::int64_t>());
    else if (v.is_number())
      e.attrs.emplace(it.key(), v.get<double>());
    else
      return fail("attribute '" + it.key() + "' must be a number or a string");
  }
  return e;
}

inline Trace load_trace(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    events.push_back(parse_event_line(line, line_no));
    if (events.size() > 1 && events.back().t < events[events.size() - 2].t)
      throw TraceError("decreasing timestamp at event " + std::to_string(events.size()) +
                       " (line " + std::to_string(line_no) + ")");
  }
  if (events.empty()) throw TraceError("empty trace file");
  return Trace(std::move(events));
}

inline Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace file: " + path.string());
  try {
    return load_trace(in);
  } catch (const TraceError& e) {
    throw TraceError(path.string() + ": " + e.what());
  }
}

inline nlohmann::json event_to_json(const Event& e) {
  nlohmann::json j;
  j["t"] = e.t;
  j["props"] = e.props;
  nlohmann::json attrs = nlohmann::json::object();
  for (const auto& [k, v] : e.attrs) {
    std::visit([&](const auto& x) { attrs[k] = x; }, v);
  }
  j["attrs"] = std::move(attrs);
  return j;
}

inline void save_trace(const Trace& tr, std::ostream& out) {
  for (const auto& e : tr.events()) out << event_to_json(e).dump() << '\n';
}

inline void save_trace(const Trace& tr, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot write trace file: " + path.string());
  save_trace(tr, out);
}

}  // namespace tlids
