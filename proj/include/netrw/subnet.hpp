#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "netrw/base.hpp"
#include "netrw/canon.hpp"
#include "netrw/jungle.hpp"
#include "netrw/net.hpp"

namespace netrw {

/// Address of a subnet occurrence: (vertex id, entry port index) steps whose
/// id set identifies the occurrence's vertices. The empty step list denotes
/// the whole net.
struct Position {
  std::vector<std::pair<std::string, int>> steps;

  std::set<std::string> vertex_set() const {
    std::set<std::string> s;
    for (const auto& [v, _] : steps) s.insert(v);
    return s;
  }
  bool whole_net() const { return steps.empty(); }
  auto operator<=>(const Position&) const = default;

  static Position of_vertices(const Net& host, const std::set<std::string>& verts) {
    Position p;
    for (const std::string& v : verts) {
      const Label& l = host.vertices.at(v);
      int idx = l.in_arities.empty() ? (l.out_arities.empty() ? 0 : l.out_arities.front())
                                     : l.in_arities.front();
      p.steps.emplace_back(v, idx);
    }
    return p;
  }
};

/// Induced subnet on a vertex subset: edges with both endpoints inside are
/// kept, every other port dangles with a generated letter. Root is dropped
/// (occurrence comparison is root-insensitive).
inline Net induced_subnet(const Net& host, const std::set<std::string>& verts) {
  Net out;
  for (const std::string& v : verts) {
    auto it = host.vertices.find(v);
    if (it == host.vertices.end()) fail(Errc::UnknownPort, "no vertex " + v);
    out.vertices[v] = it->second;
  }
  int k = 0;
  for (const std::string& v : verts) {
    for (Port p : host.ports_of(v)) {
      PortRef pr{v, p};
      auto peer = host.peer(pr);
      if (peer && verts.count(peer->vertex)) {
        if (p.dir == Dir::Out) out.edges[pr] = *peer;
      } else {
        out.dangling[pr] = "c" + std::to_string(++k);
      }
    }
  }
  validate_net(out);
  return out;
}

namespace detail {

inline std::map<std::string, std::set<std::string>> neighbor_map(const Net& n) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& [id, _] : n.vertices) adj[id];
  for (const auto& [f, t] : n.edges) {
    adj[f.vertex].insert(t.vertex);
    adj[t.vertex].insert(f.vertex);
  }
  return adj;
}

/// All connected vertex subsets, optionally size-capped. Grown by extending
/// subsets with neighbors of their maximal element or any smaller vertex,
/// standard connected-subgraph enumeration without duplicates.
inline std::vector<std::set<std::string>> connected_subsets(const Net& n,
                                                            std::size_t max_size,
                                                            std::size_t max_count) {
  auto adj = neighbor_map(n);
  std::vector<std::string> ids = n.vertex_ids();
  std::set<std::set<std::string>> seen;
  std::vector<std::set<std::string>> out;
  std::vector<std::set<std::string>> frontier;
  for (const std::string& v : ids) frontier.push_back({v});
  while (!frontier.empty()) {
    std::vector<std::set<std::string>> next;
    for (auto& s : frontier) {
      if (seen.count(s)) continue;
      seen.insert(s);
      out.push_back(s);
      if (out.size() > max_count)
        fail(Errc::SizeBudgetExceeded, "connected subset enumeration over budget");
      if (s.size() >= max_size) continue;
      for (const std::string& v : s)
        for (const std::string& w : adj[v])
          if (!s.count(w)) {
            auto grown = s;
            grown.insert(w);
            next.push_back(std::move(grown));
          }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// All occurrences of `pattern` in `host`: connected (or pattern-shaped)
/// vertex subsets whose induced subnet equals pattern's equality class.
/// Strict labels: symbols must match by name.
inline std::vector<Position> positions_of(const Net& host, const Net& pattern,
                                          std::size_t max_count = 100000) {
  std::vector<Position> out;
  if (pattern.empty()) return out;
  if (pattern.size() > host.size()) return out;
  const std::string pat_form = canonical_form(pattern);
  if (canonical_form(host) == pat_form) {
    out.push_back(Position{});
    return out;
  }
  // Label multiset pre-filter, then exact induced comparison.
  std::multiset<Label> pat_labels;
  for (const auto& [_, l] : pattern.vertices) pat_labels.insert(l);
  for (const auto& subset :
       detail::connected_subsets(host, pattern.size(), max_count)) {
    if (subset.size() != pattern.size()) continue;
    std::multiset<Label> ls;
    for (const std::string& v : subset) ls.insert(host.vertices.at(v));
    if (ls != pat_labels) continue;
    if (canonical_form(induced_subnet(host, subset)) == pat_form)
      out.push_back(Position::of_vertices(host, subset));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Every connected port-subgraph of n as a net of its own, deduplicated.
inline Jungle enclosures(const Net& n, std::size_t max_count = 4096) {
  Jungle out;
  for (const auto& subset : detail::connected_subsets(n, n.size(), max_count)) {
    out.insert(induced_subnet(n, subset));
    if (out.size() > max_count) fail(Errc::SizeBudgetExceeded, "enclosure count over budget");
  }
  return out;
}

struct LinkStats {
  std::size_t ilc = 0;         // edges entering the occurrence
  std::size_t olc = 0;         // edges leaving the occurrence
  std::size_t unoccupied = 0;  // occurrence ports dangling in the host
  std::size_t orn = 0;         // unoccupied + ilc
};

/// Boundary statistics of an occurrence of s in host. The position must
/// address an occurrence whose induced subnet is s's equality class.
inline LinkStats link_stats(const Net& s, const Net& host, const Position& at) {
  std::set<std::string> verts;
  if (at.whole_net()) {
    for (const auto& [id, _] : host.vertices) verts.insert(id);
  } else {
    verts = at.vertex_set();
  }
  for (const std::string& v : verts)
    if (!host.vertices.count(v)) fail(Errc::InvalidPosition, "position names foreign vertex " + v);
  if (canonical_form(induced_subnet(host, verts)) != canonical_form(s))
    fail(Errc::InvalidPosition, "occurrence at position does not equal the subnet");
  LinkStats st;
  for (const auto& [f, t] : host.edges) {
    bool fin = verts.count(f.vertex) > 0, tin = verts.count(t.vertex) > 0;
    if (!fin && tin) st.ilc++;
    if (fin && !tin) st.olc++;
  }
  for (const auto& [p, _] : host.dangling)
    if (verts.count(p.vertex)) st.unoccupied++;
  st.orn = st.unoccupied + st.ilc;
  return st;
}

/// Port pair to be glued by net_union: one side must be an out-port, the
/// other an in-port, both dangling in the saturated union.
struct Gluing {
  PortRef a;
  PortRef b;
};

/// Saturated union: vertices are identified by id across parts (labels must
/// agree), edges are merged, and the gluing list turns dangling port pairs
/// into edges. A port dangling in one part but edged in another follows the
/// edge; same-port letters are reconciled to the lexicographically least.
inline Net net_union(const std::vector<Net>& parts, const std::vector<Gluing>& gluing = {}) {
  Net out;
  for (const Net& part : parts) {
    for (const auto& [id, l] : part.vertices) {
      auto [it, fresh] = out.vertices.emplace(id, l);
      if (!fresh && !(it->second == l))
        fail(Errc::GluingConflict, "vertex " + id + " carries conflicting labels");
    }
    for (const auto& [f, t] : part.edges) {
      auto [it, fresh] = out.edges.emplace(f, t);
      if (!fresh && it->second != t)
        fail(Errc::GluingConflict, "port of " + f.vertex + " glued to two targets");
    }
    if (!out.root && part.root) out.root = part.root;
  }
  std::set<PortRef> occupied;
  for (const auto& [f, t] : out.edges) {
    occupied.insert(f);
    occupied.insert(t);
  }
  for (const Net& part : parts)
    for (const auto& [p, letter] : part.dangling) {
      if (occupied.count(p)) continue;
      auto [it, fresh] = out.dangling.emplace(p, letter);
      if (!fresh && letter < it->second) it->second = letter;
    }
  for (const Gluing& g : gluing) {
    PortRef from = g.a, to = g.b;
    if (from.port.dir == Dir::In) std::swap(from, to);
    if (from.port.dir != Dir::Out || to.port.dir != Dir::In)
      fail(Errc::GluingConflict, "gluing needs one out-port and one in-port");
    if (!out.dangling.count(from) || !out.dangling.count(to))
      fail(Errc::GluingConflict, "gluing of a non-dangling port");
    out.dangling.erase(from);
    out.dangling.erase(to);
    auto [_, fresh] = out.edges.emplace(from, to);
    if (!fresh) fail(Errc::GluingConflict, "port glued twice");
  }
  validate_net(out);
  return out;
}

/// Letter multiset L(t): names of ranked letters in t.
inline std::multiset<std::string> letter_multiset(const Net& n) {
  std::multiset<std::string> out;
  for (const auto& [_, l] : n.vertices)
    if (l.kind == Label::Kind::Ranked) out.insert(l.name);
  return out;
}

inline std::set<std::string> letter_set(const Net& n) {
  std::set<std::string> out;
  for (const auto& [_, l] : n.vertices)
    if (l.kind == Label::Kind::Ranked) out.insert(l.name);
  return out;
}

inline std::set<std::string> letter_set(const Jungle& j) {
  std::set<std::string> out;
  for (const auto& [_, n] : j) {
    auto s = letter_set(n);
    out.insert(s.begin(), s.end());
  }
  return out;
}

/// The net stripped of frontier-letter attachments.
inline Net apex(const Net& n) {
  std::set<std::string> ranked_ids;
  for (const auto& [id, l] : n.vertices)
    if (l.kind == Label::Kind::Ranked) ranked_ids.insert(id);
  if (ranked_ids.size() == n.vertices.size()) return n;
  return induced_subnet(n, ranked_ids);
}

}  // namespace netrw
