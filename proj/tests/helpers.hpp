#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "netrw/canon.hpp"
#include "netrw/net.hpp"

namespace th {

using namespace netrw;

inline Label sym_a() { return ranked("a", 2, 1); }   // in {1,2}, out {1}
inline Label sym_b() { return ranked("b", 1, 1); }
inline Label sym_u() { return ranked("u", 1, 1); }   // unary-ish loop alphabet
inline Label sym_w() { return ranked("w", 1, 2); }

/// Single vertex, all ports dangling.
inline Net single(const Label& l, const std::string& id = "v1") {
  return NetBuilder().vertex(id, l).build();
}

/// v1 -> v2 chain over (1,1)-ranked symbols.
inline Net chain2(const Label& l1, const Label& l2) {
  return NetBuilder().vertex("v1", l1).vertex("v2", l2).edge("v1", 1, "v2", 1).build();
}

inline Net chain3(const Label& l1, const Label& l2, const Label& l3) {
  return NetBuilder()
      .vertex("v1", l1)
      .vertex("v2", l2)
      .vertex("v3", l3)
      .edge("v1", 1, "v2", 1)
      .edge("v2", 1, "v3", 1)
      .build();
}

/// Self-loop on a (1,1) symbol.
inline Net loop1(const Label& l) {
  return NetBuilder().vertex("v1", l).edge("v1", 1, "v1", 1).build();
}

/// Test-only oracle: canonical form as the minimum encoding over all vertex
/// permutations, computed with none of the engine's refinement machinery.
inline std::string brute_canonical_form(const Net& n) {
  std::vector<std::string> ids = n.vertex_ids();
  if (ids.empty()) return "()";
  std::sort(ids.begin(), ids.end());
  std::string best;
  do {
    std::map<std::string, int> pos;
    for (int i = 0; i < int(ids.size()); ++i) pos[ids[i]] = i;
    std::string enc;
    for (const std::string& v : ids) {
      const Label& l = n.vertices.at(v);
      enc += l.kind == Label::Kind::Frontier ? "F|" : "R|";
      enc += l.name + "|";
      for (int i : l.in_arities) enc += std::to_string(i) + ",";
      enc += "|";
      for (int j : l.out_arities) enc += std::to_string(j) + ",";
      for (Port p : n.ports_of(v)) {
        auto peer = n.peer(PortRef{v, p});
        if (!peer)
          enc += "D";
        else
          enc += "E" + std::to_string(pos.at(peer->vertex)) + "." +
                 std::to_string(int(peer->port.dir)) + "." + std::to_string(peer->port.index) +
                 ";";
      }
    }
    if (best.empty() || enc < best) best = enc;
  } while (std::next_permutation(ids.begin(), ids.end()));
  return best;
}

/// Test-only oracle: isomorphism by brute-force search over vertex bijections
/// plus consistency of the induced symbol/frontier renaming.
inline bool brute_isomorphic(const Net& a, const Net& b) {
  std::vector<std::string> av = a.vertex_ids(), bv = b.vertex_ids();
  if (av.size() != bv.size() || a.edges.size() != b.edges.size() ||
      a.dangling.size() != b.dangling.size())
    return false;
  std::sort(bv.begin(), bv.end());
  do {
    std::map<std::string, std::string> m;  // a vertex -> b vertex
    for (std::size_t i = 0; i < av.size(); ++i) m[av[i]] = bv[i];
    bool ok = true;
    std::map<std::string, std::string> ren, fen;  // symbol renamings, both kinds
    std::map<std::string, std::string> ren_inv, fen_inv;
    for (const auto& [id, la] : a.vertices) {
      const Label& lb = b.vertices.at(m[id]);
      if (la.kind != lb.kind || la.in_arities != lb.in_arities ||
          la.out_arities != lb.out_arities) {
        ok = false;
        break;
      }
      auto& fwd = la.kind == Label::Kind::Ranked ? ren : fen;
      auto& inv = la.kind == Label::Kind::Ranked ? ren_inv : fen_inv;
      auto it = fwd.find(la.name);
      if (it != fwd.end() && it->second != lb.name) ok = false;
      auto jt = inv.find(lb.name);
      if (jt != inv.end() && jt->second != la.name) ok = false;
      if (!ok) break;
      fwd[la.name] = lb.name;
      inv[lb.name] = la.name;
    }
    if (ok) {
      for (const auto& [f, t] : a.edges) {
        PortRef bf{m[f.vertex], f.port}, bt{m[t.vertex], t.port};
        auto it = b.edges.find(bf);
        if (it == b.edges.end() || it->second != bt) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      for (const auto& [p, _] : a.dangling)
        if (!b.dangling.count(PortRef{m[p.vertex], p.port})) {
          ok = false;
          break;
        }
    }
    if (ok) return true;
  } while (std::next_permutation(bv.begin(), bv.end()));
  return false;
}

}  // namespace th
