#pragma once

// Text serialization of event streams and the CSV contact-interval importer.
//
// Stream file grammar (UTF-8, LF line endings):
//   trg-stream v1
//   kind contact|reach
//   eta <positive int>
//   tau <non-negative int, units of eta>
//   nodes <N>
//   horizon <T>
//   <t> UP <u> <v>     (one event per line, canonically sorted;
//   <t> DOWN <u> <v>    contact lines require u < v)

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "trg/stream.hpp"

namespace trg {

inline std::string serialize_stream(const EventStream& s) {
  std::string out;
  out += "trg-stream v1\n";
  out += "kind ";
  out += (s.kind == StreamKind::contact ? "contact" : "reach");
  out += "\n";
  out += "eta " + std::to_string(s.eta) + "\n";
  out += "tau " + std::to_string(s.tau) + "\n";
  out += "nodes " + std::to_string(s.nodes) + "\n";
  out += "horizon " + std::to_string(s.horizon) + "\n";
  for (const Event& e : s.events) {
    out += std::to_string(e.t);
    out += (e.type == EventType::up ? " UP " : " DOWN ");
    out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

template <class Int>
Int parse_int(const std::string& tok, int line, const char* what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("NonIntegerValue", line,
                     std::string(what) + " is not an integer: '" + tok + "'");
  return value;
}

}  // namespace detail

// Parses and fully validates a stream file. Round-trips byte-exactly with
// serialize_stream for canonical input.
inline EventStream parse_stream(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw ParseError("MalformedHeader", lineno + 1,
                       std::string("missing ") + what);
    ++lineno;
  };

  EventStream s;
  next_line("magic line");
  if (line != "trg-stream v1")
    throw ParseError("MalformedHeader", lineno, "expected 'trg-stream v1'");
  next_line("kind");
  if (line == "kind contact")
    s.kind = StreamKind::contact;
  else if (line == "kind reach")
    s.kind = StreamKind::reach;
  else
    throw ParseError("MalformedHeader", lineno, "expected 'kind contact|reach'");

  auto header_int = [&](const char* name) -> Time {
    next_line(name);
    auto tokens = detail::split_ws(line);
    if (tokens.size() != 2 || tokens[0] != name)
      throw ParseError("MalformedHeader", lineno,
                       std::string("expected '") + name + " <int>'");
    return detail::parse_int<Time>(tokens[1], lineno, name);
  };
  s.eta = header_int("eta");
  if (s.eta <= 0) throw ParseError("MalformedHeader", lineno, "eta must be positive");
  s.tau = header_int("tau");
  if (s.tau < 0)
    throw ParseError("MalformedHeader", lineno, "tau must be non-negative");
  Time nodes = header_int("nodes");
  if (nodes <= 0 || nodes > 0xffffffffll)
    throw ParseError("MalformedHeader", lineno, "nodes out of range");
  s.nodes = static_cast<VertexId>(nodes);
  s.horizon = header_int("horizon");
  if (s.horizon < 0)
    throw ParseError("MalformedHeader", lineno, "horizon must be non-negative");

  // (pair -> up time) for open intervals; tracks interval pairing rules.
  std::unordered_map<ArcKey, Time> open;
  const Event* prev = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      throw ParseError("MalformedEvent", lineno, "empty event line");
    auto tokens = detail::split_ws(line);
    if (tokens.size() != 4)
      throw ParseError("MalformedEvent", lineno,
                       "expected '<t> UP|DOWN <u> <v>'");
    Event e;
    e.t = detail::parse_int<Time>(tokens[0], lineno, "event time");
    if (tokens[1] == "UP")
      e.type = EventType::up;
    else if (tokens[1] == "DOWN")
      e.type = EventType::down;
    else
      throw ParseError("MalformedEvent", lineno, "expected UP or DOWN");
    e.u = detail::parse_int<VertexId>(tokens[2], lineno, "vertex id");
    e.v = detail::parse_int<VertexId>(tokens[3], lineno, "vertex id");

    if (e.t < 0 || e.t > s.horizon)
      throw ParseError("TimeOutOfRange", lineno, "event time outside [0, horizon]");
    if (e.u >= s.nodes || e.v >= s.nodes)
      throw ParseError("VertexOutOfRange", lineno, "vertex id >= nodes");
    if (e.u == e.v)
      throw ParseError("InvalidPair", lineno, "self-loop endpoints");
    if (s.kind == StreamKind::contact && e.u > e.v)
      throw ParseError("InvalidPair", lineno,
                       "contact endpoints must satisfy u < v");
    if (prev && !event_less(*prev, e)) {
      if (*prev == e)
        throw ParseError("DuplicateEvent", lineno, "duplicate event");
      throw ParseError("UnsortedEvents", lineno, "events out of canonical order");
    }

    ArcKey key = arc_key(e.u, e.v);
    if (e.type == EventType::up) {
      if (open.count(key))
        throw ParseError("UpWhileUp", lineno,
                         "up event while the pair is already up");
      open.emplace(key, e.t);
    } else {
      auto it = open.find(key);
      if (it == open.end())
        throw ParseError("DownWithoutUp", lineno, "down event without prior up");
      if (s.kind == StreamKind::contact && e.t <= it->second)
        throw ParseError("ZeroLengthContact", lineno,
                         "contact interval must satisfy down > up");
      open.erase(it);
    }
    s.events.push_back(e);
    prev = &s.events.back();
  }
  if (!open.empty())
    throw ParseError("UnclosedInterval", lineno,
                     "up event without matching down");
  return s;
}

struct ContactInterval {
  VertexId u, v;
  Time up, down;  // raw time units (multiples of eta)
};

// Builds a contact stream from raw intervals. Times are divided by eta;
// touching intervals per pair are merged, overlaps are rejected.
inline EventStream import_contact_trace(const std::vector<ContactInterval>& intervals,
                                        Time eta, Time tau, VertexId nodes,
                                        Time horizon = -1) {
  if (eta <= 0) throw StreamError("BadConfig", "eta must be positive");
  if (tau < 0) throw StreamError("BadConfig", "tau must be non-negative");
  if (nodes == 0) throw StreamError("BadConfig", "nodes must be positive");

  std::map<ArcKey, std::vector<Interval>> per_pair;
  for (const ContactInterval& ci : intervals) {
    VertexId u = ci.u, v = ci.v;
    if (u == v) throw StreamError("InvalidPair", "self-loop contact");
    if (u > v) std::swap(u, v);
    if (v >= nodes) throw StreamError("VertexOutOfRange", "vertex id >= nodes");
    if (ci.up % eta != 0 || ci.down % eta != 0)
      throw StreamError("NonMultipleTime", "interval bounds must be multiples of eta");
    Time up = ci.up / eta, down = ci.down / eta;
    if (up < 0) throw StreamError("TimeOutOfRange", "negative interval start");
    if (down < up + 1)
      throw StreamError("ZeroLengthContact",
                        "interval must satisfy down >= up + eta");
    per_pair[arc_key(u, v)].push_back({up, down});
  }

  EventStream s;
  s.kind = StreamKind::contact;
  s.eta = eta;
  s.tau = tau;
  s.nodes = nodes;
  Time max_down = 0;
  PairIntervals merged;
  for (auto& [key, ivs] : per_pair) {
    std::sort(ivs.begin(), ivs.end(),
              [](const Interval& a, const Interval& b) { return a.up < b.up; });
    std::vector<Interval> out;
    for (const Interval& iv : ivs) {
      if (!out.empty() && iv.up < out.back().down)
        throw StreamError("OverlappingIntervals",
                          "overlapping intervals for the same pair");
      if (!out.empty() && iv.up == out.back().down)
        out.back().down = iv.down;  // touching intervals merge
      else
        out.push_back(iv);
      max_down = std::max(max_down, out.back().down);
    }
    merged.push_back({key, std::move(out)});
  }
  s.horizon = horizon >= 0 ? horizon : max_down;
  if (max_down > s.horizon)
    throw StreamError("TimeOutOfRange", "interval beyond horizon");
  s.events = events_from_intervals(merged);
  return s;
}

// CSV interval import: header row `u,v,up,down` required, one interval per
// line, times in raw units (multiples of eta).
inline std::vector<ContactInterval> parse_interval_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line))
    throw ParseError("MalformedHeader", 1, "empty CSV");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v,up,down")
    throw ParseError("MalformedHeader", 1, "expected header 'u,v,up,down'");
  std::vector<ContactInterval> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4)
      throw ParseError("MalformedEvent", lineno, "expected 4 fields");
    ContactInterval ci;
    ci.u = detail::parse_int<VertexId>(fields[0], lineno, "u");
    ci.v = detail::parse_int<VertexId>(fields[1], lineno, "v");
    ci.up = detail::parse_int<Time>(fields[2], lineno, "up");
    ci.down = detail::parse_int<Time>(fields[3], lineno, "down");
    out.push_back(ci);
  }
  return out;
}

inline EventStream read_stream_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StreamError("FileError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stream(buf.str());
}

inline void write_stream_file(const std::string& path, const EventStream& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StreamError("FileError", "cannot open " + path);
  out << serialize_stream(s);
}

}  // namespace trg
