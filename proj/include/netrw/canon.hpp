#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "netrw/net.hpp"

namespace netrw {

namespace detail {

/// Flat view of a net for the labeling search: vertices indexed 0..n-1,
/// each with a fixed port slot list and per-slot peer (vertex, slot) or -1.
struct CanonView {
  std::vector<std::string> ids;                       // index -> vertex id
  std::vector<const Label*> labels;                   // index -> label
  std::vector<std::vector<Port>> slots;               // index -> port list
  std::vector<std::vector<std::pair<int, int>>> peer; // index -> slot -> (vertex, slot) or (-1,-1)

  explicit CanonView(const Net& n) {
    ids = n.vertex_ids();
    std::map<std::string, int> pos;
    for (int i = 0; i < int(ids.size()); ++i) pos[ids[i]] = i;
    labels.resize(ids.size());
    slots.resize(ids.size());
    peer.resize(ids.size());
    std::map<PortRef, std::pair<int, int>> slot_of;
    for (int i = 0; i < int(ids.size()); ++i) {
      labels[i] = &n.vertices.at(ids[i]);
      for (Port p : n.ports_of(ids[i])) {
        slot_of[PortRef{ids[i], p}] = {i, int(slots[i].size())};
        slots[i].push_back(p);
      }
      peer[i].assign(slots[i].size(), {-1, -1});
    }
    for (const auto& [f, t] : n.edges) {
      auto [fv, fs] = slot_of.at(f);
      auto [tv, ts] = slot_of.at(t);
      peer[fv][fs] = {tv, ts};
      peer[tv][ts] = {fv, fs};
    }
  }

  int size() const { return int(ids.size()); }

  std::string label_key(int v, bool strict) const {
    const Label& l = *labels[v];
    std::string k = l.kind == Label::Kind::Frontier ? "F|" : "R|";
    if (strict) k += l.name;
    k += '|';
    for (int i : l.in_arities) k += std::to_string(i) + ",";
    k += '|';
    for (int j : l.out_arities) k += std::to_string(j) + ",";
    return k;
  }
};

inline std::vector<int> refine_colors(const CanonView& g, std::vector<int> colors) {
  for (;;) {
    std::vector<std::string> sig(g.size());
    for (int v = 0; v < g.size(); ++v) {
      std::string s = std::to_string(colors[v]);
      for (int k = 0; k < int(g.slots[v].size()); ++k) {
        auto [pv, ps] = g.peer[v][k];
        s += pv < 0 ? ";D" : ";" + std::to_string(colors[pv]) + "." + std::to_string(ps);
      }
      sig[v] = std::move(s);
    }
    std::vector<std::string> uniq = sig;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> next(g.size());
    for (int v = 0; v < g.size(); ++v)
      next[v] = int(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
    if (next == colors) return colors;
    colors = std::move(next);
  }
}

inline std::string encode_order(const CanonView& g, const std::vector<int>& order,
                                bool strict) {
  std::vector<int> pos(g.size());
  for (int i = 0; i < int(order.size()); ++i) pos[order[i]] = i;
  std::string out;
  for (int v : order) {
    out += "V(" + g.label_key(v, strict) + ")";
    for (int k = 0; k < int(g.slots[v].size()); ++k) {
      auto [pv, ps] = g.peer[v][k];
      out += pv < 0 ? "D" : "E" + std::to_string(pos[pv]) + "." + std::to_string(ps) + ";";
    }
  }
  return out;
}

/// Individualization-refinement canonical labeling: explore all branchings of
/// the first non-singleton cell, keep the lexicographically least encoding.
inline void canon_search(const CanonView& g, std::vector<int> colors, bool strict,
                         std::string& best, std::vector<int>& best_order) {
  colors = refine_colors(g, colors);
  std::map<int, std::vector<int>> cells;
  for (int v = 0; v < g.size(); ++v) cells[colors[v]].push_back(v);
  const std::vector<int>* target = nullptr;
  for (const auto& [c, vs] : cells)
    if (vs.size() > 1) {
      target = &vs;
      break;
    }
  if (!target) {
    std::vector<int> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return colors[a] < colors[b]; });
    std::string enc = encode_order(g, order, strict);
    if (best.empty() || enc < best) {
      best = std::move(enc);
      best_order = std::move(order);
    }
    return;
  }
  for (int v : *target) {
    std::vector<int> child = colors;
    for (int& c : child) c *= 2;
    child[v] -= 1;  // split v off its cell, keeping relative color order
    canon_search(g, std::move(child), strict, best, best_order);
  }
}

inline std::pair<std::string, std::vector<int>> canonicalize_view(const CanonView& g,
                                                                  bool strict) {
  if (g.size() == 0) return {"()", {}};
  std::vector<std::string> keys(g.size());
  for (int v = 0; v < g.size(); ++v) keys[v] = g.label_key(v, strict);
  std::vector<std::string> uniq = keys;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<int> colors(g.size());
  for (int v = 0; v < g.size(); ++v)
    colors[v] = int(std::lower_bound(uniq.begin(), uniq.end(), keys[v]) - uniq.begin());
  std::string best;
  std::vector<int> best_order;
  canon_search(g, std::move(colors), strict, best, best_order);
  return {best, best_order};
}

}  // namespace detail

/// Strict canonical byte string: invariant under renaming of vertex ids and
/// arity letters; ranked symbols and frontier letter names are preserved.
/// Equal strings define the classes of equal nets used as Jungle keys.
inline std::string canonical_form(const Net& n) {
  detail::CanonView g(n);
  return detail::canonicalize_view(g, /*strict=*/true).first;
}

/// Vertex ids in canonical order (first id = canonical vertex 0, ...).
inline std::vector<std::string> canon_order(const Net& n) {
  detail::CanonView g(n);
  auto [_, order] = detail::canonicalize_view(g, /*strict=*/true);
  std::vector<std::string> out;
  out.reserve(order.size());
  for (int v : order) out.push_back(g.ids[v]);
  return out;
}

/// The canonical representative of a net's equality class: vertices renamed
/// n0, n1, ... in canonical order; dangling letters renamed x1, x2, ... in
/// canonical port order (frontier letter names are part of the class and stay).
inline Net canonical_member(const Net& n) {
  std::vector<std::string> order = canon_order(n);
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < order.size(); ++i)
    rename[order[i]] = "n" + std::to_string(i);
  Net out;
  for (const auto& [id, l] : n.vertices) out.vertices[rename.at(id)] = l;
  for (const auto& [f, t] : n.edges)
    out.edges[PortRef{rename.at(f.vertex), f.port}] = PortRef{rename.at(t.vertex), t.port};
  int k = 0;
  for (const std::string& id : order) {
    for (Port p : n.ports_of(id)) {
      PortRef pr{id, p};
      if (n.dangling.count(pr))
        out.dangling[PortRef{rename.at(id), p}] = "x" + std::to_string(++k);
    }
  }
  if (n.root) out.root = rename.at(*n.root);
  validate_net(out);
  return out;
}

namespace detail {

inline Net rename_letters(const Net& n, const std::map<std::string, std::string>& ranked_map,
                          const std::map<std::string, std::string>& frontier_map) {
  Net out = n;
  for (auto& [id, l] : out.vertices) {
    if (l.kind == Label::Kind::Ranked) {
      auto it = ranked_map.find(l.name);
      if (it != ranked_map.end()) l.name = it->second;
    } else {
      auto it = frontier_map.find(l.name);
      if (it != frontier_map.end()) l.name = it->second;
    }
  }
  return out;
}

}  // namespace detail

/// Canonical form of the net's isomorphism class: like canonical_form but with
/// ranked symbols and frontier letters renamed by the best bijection (ranks
/// and letter multiplicities are preserved automatically since only names
/// change). Minimum over all bijections of the strict form.
inline std::string iso_form(const Net& n) {
  std::set<std::string> ranked_names, frontier_names;
  for (const auto& [id, l] : n.vertices)
    (l.kind == Label::Kind::Ranked ? ranked_names : frontier_names).insert(l.name);
  std::vector<std::string> rn(ranked_names.begin(), ranked_names.end());
  std::vector<std::string> fn(frontier_names.begin(), frontier_names.end());
  if (rn.size() > 6 || fn.size() > 6)
    fail(Errc::SizeBudgetExceeded, "too many distinct letters for iso_form");
  std::vector<int> rp(rn.size()), fp(fn.size());
  std::iota(rp.begin(), rp.end(), 0);
  std::iota(fp.begin(), fp.end(), 0);
  std::string best;
  do {
    std::map<std::string, std::string> rmap;
    for (std::size_t i = 0; i < rn.size(); ++i) rmap[rn[i]] = "S" + std::to_string(rp[i]);
    std::vector<int> fq = fp;
    do {
      std::map<std::string, std::string> fmap;
      for (std::size_t i = 0; i < fn.size(); ++i) fmap[fn[i]] = "X" + std::to_string(fq[i]);
      std::string form = canonical_form(detail::rename_letters(n, rmap, fmap));
      if (best.empty() || form < best) best = std::move(form);
    } while (std::next_permutation(fq.begin(), fq.end()));
  } while (std::next_permutation(rp.begin(), rp.end()));
  if (best.empty()) best = canonical_form(n);  // no letters at all (empty net)
  return best;
}

/// Net isomorphism: a bijection renaming at most symbols of letters, keeping
/// ranks and letter/position cardinalities.
inline bool is_isomorphic(const Net& a, const Net& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size() ||
      a.dangling.size() != b.dangling.size())
    return false;
  return iso_form(a) == iso_form(b);
}

}  // namespace netrw
