#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "netrw/base.hpp"

namespace netrw {

enum class Dir : int { In = 0, Out = 1 };

struct Port {
  Dir dir = Dir::In;
  int index = 0;
  auto operator<=>(const Port&) const = default;
};

inline Port in_port(int i) { return Port{Dir::In, i}; }
inline Port out_port(int i) { return Port{Dir::Out, i}; }

struct PortRef {
  std::string vertex;
  Port port;
  auto operator<=>(const PortRef&) const = default;
};

/// Vertex label: a ranked symbol with indexed in/out arities, or a frontier
/// (manoeuvre) letter with exactly one attachment port.
struct Label {
  enum class Kind { Ranked, Frontier };
  Kind kind = Kind::Ranked;
  std::string name;
  std::vector<int> in_arities;   // sorted, distinct
  std::vector<int> out_arities;  // sorted, distinct

  int rank() const { return int(in_arities.size() + out_arities.size()); }
  bool has_port(Port p) const {
    const auto& v = p.dir == Dir::In ? in_arities : out_arities;
    return std::binary_search(v.begin(), v.end(), p.index);
  }
  auto operator<=>(const Label&) const = default;
};

inline Label ranked(std::string name, int ins, int outs) {
  Label l;
  l.kind = Label::Kind::Ranked;
  l.name = std::move(name);
  for (int i = 1; i <= ins; ++i) l.in_arities.push_back(i);
  for (int j = 1; j <= outs; ++j) l.out_arities.push_back(j);
  return l;
}

inline Label frontier(std::string name, Dir d) {
  Label l;
  l.kind = Label::Kind::Frontier;
  l.name = std::move(name);
  (d == Dir::In ? l.in_arities : l.out_arities).push_back(1);
  return l;
}

/// A port graph over ranked/frontier labels. Every port of every vertex is
/// either one endpoint of exactly one edge or carries an arity letter in
/// `dangling`. Loops are permitted. Construct through build_net, which
/// validates all of this.
struct Net {
  std::map<std::string, Label> vertices;
  std::map<PortRef, PortRef> edges;  // out-port -> in-port
  std::map<PortRef, std::string> dangling;
  std::optional<std::string> root;

  std::size_t size() const { return vertices.size(); }
  bool empty() const { return vertices.empty(); }

  std::vector<Port> ports_of(const std::string& v) const {
    const Label& l = vertices.at(v);
    std::vector<Port> r;
    for (int i : l.in_arities) r.push_back(in_port(i));
    for (int j : l.out_arities) r.push_back(out_port(j));
    return r;
  }

  /// Peer of an occupied port, if any. Out-ports look up `edges` directly;
  /// in-ports scan (desk-scale nets, linear is fine).
  std::optional<PortRef> peer(const PortRef& p) const {
    if (p.port.dir == Dir::Out) {
      auto it = edges.find(p);
      if (it != edges.end()) return it->second;
      return std::nullopt;
    }
    for (const auto& [o, i] : edges)
      if (i == p) return o;
    return std::nullopt;
  }

  bool is_dangling(const PortRef& p) const { return dangling.count(p) > 0; }

  std::vector<std::string> vertex_ids() const {
    std::vector<std::string> r;
    r.reserve(vertices.size());
    for (const auto& [id, _] : vertices) r.push_back(id);
    return r;
  }

  bool operator==(const Net&) const = default;
};

inline void validate_net(const Net& n) {
  auto check_port = [&](const PortRef& p, Dir want) {
    auto it = n.vertices.find(p.vertex);
    if (it == n.vertices.end()) fail(Errc::UnknownPort, "no vertex " + p.vertex);
    if (p.port.dir != want)
      fail(Errc::UnknownPort, "wrong port direction at " + p.vertex);
    if (!it->second.has_port(p.port))
      fail(Errc::UnknownPort, "vertex " + p.vertex + " has no such port");
  };
  std::map<PortRef, int> occupancy;
  for (const auto& [from, to] : n.edges) {
    check_port(from, Dir::Out);
    check_port(to, Dir::In);
    occupancy[from]++;
    occupancy[to]++;
  }
  for (const auto& [p, letter] : n.dangling) {
    check_port(p, p.port.dir);
    if (letter.empty()) fail(Errc::ValidationError, "empty arity letter at " + p.vertex);
    occupancy[p]++;
  }
  for (const auto& [id, label] : n.vertices) {
    if (label.kind == Label::Kind::Frontier && label.rank() != 1)
      fail(Errc::FrontierArityViolation, "frontier letter " + label.name +
                                             " at " + id + " must have exactly one port");
    std::set<int> seen;
    for (int i : label.in_arities)
      if (!seen.insert(i).second)
        fail(Errc::ValidationError, "duplicate in-arity index at " + id);
    seen.clear();
    for (int j : label.out_arities)
      if (!seen.insert(j).second)
        fail(Errc::ValidationError, "duplicate out-arity index at " + id);
    for (Port p : n.ports_of(id)) {
      auto it = occupancy.find(PortRef{id, p});
      if (it == occupancy.end())
        fail(Errc::ValidationError,
             "unaccounted port on " + id + " (neither edged nor dangling)");
      if (it->second > 1)
        fail(Errc::DuplicatePortOccupancy, "port on " + id + " occupied twice");
    }
  }
  // Occupancy keys referencing ports outside any vertex's arity set were
  // caught above; a count larger than the port total means a stray entry.
  std::size_t total_ports = 0;
  for (const auto& [id, label] : n.vertices) total_ports += std::size_t(label.rank());
  if (occupancy.size() != total_ports)
    fail(Errc::UnknownPort, "edge or dangling entry references a foreign port");
  if (n.root && !n.vertices.count(*n.root))
    fail(Errc::ValidationError, "root vertex missing");
}

inline Net build_net(std::map<std::string, Label> vertices,
                     std::map<PortRef, PortRef> edges,
                     std::map<PortRef, std::string> dangling,
                     std::optional<std::string> root = std::nullopt) {
  Net n;
  n.vertices = std::move(vertices);
  n.edges = std::move(edges);
  n.dangling = std::move(dangling);
  n.root = std::move(root);
  validate_net(n);
  return n;
}

/// Convenience builder used all over the tests and generators: takes vertex
/// (id, label) pairs and edge endpoint pairs, then marks every untouched port
/// dangling with generated letters a1, a2, ...
class NetBuilder {
 public:
  NetBuilder& vertex(const std::string& id, Label l) {
    vertices_[id] = std::move(l);
    return *this;
  }
  NetBuilder& edge(const std::string& from, int out_idx, const std::string& to, int in_idx) {
    edges_[PortRef{from, out_port(out_idx)}] = PortRef{to, in_port(in_idx)};
    return *this;
  }
  NetBuilder& letter(const std::string& v, Port p, const std::string& name) {
    named_[PortRef{v, p}] = name;
    return *this;
  }
  NetBuilder& root(const std::string& v) {
    root_ = v;
    return *this;
  }
  Net build() {
    std::map<PortRef, std::string> dangling = named_;
    std::set<PortRef> occupied;
    for (const auto& [f, t] : edges_) {
      occupied.insert(f);
      occupied.insert(t);
    }
    int k = 0;
    Net probe;
    probe.vertices = vertices_;
    for (const auto& [id, label] : vertices_) {
      for (Port p : probe.ports_of(id)) {
        PortRef pr{id, p};
        if (!occupied.count(pr) && !dangling.count(pr)) dangling[pr] = "a" + std::to_string(++k);
      }
    }
    return build_net(vertices_, edges_, dangling, root_);
  }

 private:
  std::map<std::string, Label> vertices_;
  std::map<PortRef, PortRef> edges_;
  std::map<PortRef, std::string> named_;
  std::optional<std::string> root_;
};

}  // namespace netrw
