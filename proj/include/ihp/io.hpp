#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ihp/common.hpp"
#include "ihp/game.hpp"
#include "ihp/multigraph.hpp"

namespace ihp {

// Doubles are printed with %.17g so outputs replay byte-for-byte.
inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string bits_to_string(const BitString& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline BitString bits_from_string(const std::string& s) {
  BitString b;
  b.reserve(s.size());
  for (char c : s) b.push_back(c == '1' ? 1 : 0);
  return b;
}

// ---------------------------------------------------------------------------
// Instance files: line-delimited text, documented field order.
//
//   ihp-instance v1
//   params <n> <match_size> <T> <case yes|no>
//   hidden <bitstring>          (YES case only)
//   matching <t> <a_1> <b_1> ... <a_k> <b_k>   (canonical edge order)
//   labels <t> <bitstring>

inline void write_instance(std::ostream& os, const DihpInstance& inst) {
  os << "ihp-instance v1\n";
  os << "params " << inst.n << ' ' << inst.match_size << ' ' << inst.players
     << ' ' << (inst.tag == Case::Yes ? "yes" : "no") << '\n';
  if (inst.tag == Case::Yes) os << "hidden " << bits_to_string(inst.hidden) << '\n';
  for (int t = 0; t < inst.players; ++t) {
    os << "matching " << t;
    for (const auto& [a, b] : inst.matchings[t].edges) os << ' ' << a << ' ' << b;
    os << '\n';
    os << "labels " << t << ' ' << bits_to_string(inst.labels[t]) << '\n';
  }
}

inline DihpInstance read_instance(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "ihp-instance v1")
    throw std::runtime_error("read_instance: bad header");
  DihpInstance inst;
  std::string tag;
  while (std::getline(is, line)) {
    if (line.empty()) break;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "params") {
      std::string c;
      ls >> inst.n >> inst.match_size >> inst.players >> c;
      inst.tag = c == "yes" ? Case::Yes : Case::No;
      inst.matchings.resize(inst.players);
      inst.labels.resize(inst.players);
    } else if (kind == "hidden") {
      std::string bits;
      ls >> bits;
      inst.hidden = bits_from_string(bits);
    } else if (kind == "matching") {
      int t, a, b;
      ls >> t;
      Matching m;
      m.n = inst.n;
      while (ls >> a >> b) m.edges.emplace_back(a, b);
      inst.matchings[t] = std::move(m);
    } else if (kind == "labels") {
      int t;
      std::string bits;
      ls >> t >> bits;
      inst.labels[t] = bits_from_string(bits);
    }
  }
  return inst;
}

inline void write_transcript(std::ostream& os, const Transcript& tr) {
  os << "ihp-transcript v1\n";
  os << "budget " << tr.budget << " output "
     << (tr.output_yes ? "yes" : "no") << '\n';
  for (std::size_t t = 0; t < tr.messages.size(); ++t) {
    const auto& m = tr.messages[t];
    os << "message " << t << ' ' << m.charged << ' ' << m.free_bits << ' ';
    for (auto b : m.bits) os << (b ? '1' : '0');
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Multigraph files: "u v multiplicity" per line after a one-line header.

inline void write_multigraph(std::ostream& os, const MultiGraph& g) {
  os << "ihp-graph v1 " << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges)
    os << e.a << ' ' << e.b << ' ' << e.mult << '\n';
}

inline MultiGraph read_multigraph(std::istream& is) {
  std::string header;
  int n = 0;
  std::size_t cnt = 0;
  is >> header;
  if (header != "ihp-graph") throw std::runtime_error("read_multigraph: bad header");
  is >> header >> n >> cnt;
  MultiGraph g;
  g.n = n;
  for (std::size_t i = 0; i < cnt; ++i) {
    int a, b, mult;
    is >> a >> b >> mult;
    g.add_edge(a, b, mult);
  }
  g.finalize();
  return g;
}

}  // namespace ihp
