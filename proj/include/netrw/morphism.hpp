#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "netrw/base.hpp"
#include "netrw/jungle.hpp"
#include "netrw/net.hpp"
#include "netrw/subnet.hpp"

namespace netrw {

/// A net with one designated dangling port, the gluing point used when the
/// fragment replaces a frontier letter.
struct NetFragment {
  Net net;
  PortRef attach;
};

inline void validate_fragment(const NetFragment& f) {
  validate_net(f.net);
  if (!f.net.dangling.count(f.attach))
    fail(Errc::ValidationError, "fragment attach port must be dangling");
}

/// Placeholder arity letters marking where a replacement net reconnects the
/// image of each source arity.
inline std::string placeholder_in(int i) { return "&i" + std::to_string(i); }
inline std::string placeholder_out(int j) { return "&o" + std::to_string(j); }

/// Relation-style net homomorphism: every map sends a letter to a finite set
/// of alternatives. Replacement nets for a ranked symbol carry placeholder
/// letters bijective with the symbol's arity sets.
struct NetHomomorphism {
  std::map<std::string, std::vector<Net>> symbol_map;
  std::map<std::string, std::vector<NetFragment>> frontier_map;
  std::map<std::string, std::vector<std::string>> arity_map;
};

/// Replacement net that just relabels a symbol: a single fresh vertex wired
/// through placeholders.
inline Net relabel_image(const Label& source, const std::string& target_name) {
  Label l = source;
  l.name = target_name;
  NetBuilder b;
  b.vertex("i0", l);
  for (int i : source.in_arities) b.letter("i0", in_port(i), placeholder_in(i));
  for (int j : source.out_arities) b.letter("i0", out_port(j), placeholder_out(j));
  return b.build();
}

inline NetHomomorphism identity_homomorphism(const std::vector<Label>& alphabet,
                                             const std::vector<std::string>& arity_letters = {},
                                             const std::vector<Label>& frontier_letters = {}) {
  NetHomomorphism h;
  for (const Label& l : alphabet) h.symbol_map[l.name] = {relabel_image(l, l.name)};
  for (const std::string& x : arity_letters) h.arity_map[x] = {x};
  for (const Label& f : frontier_letters) {
    Net n = NetBuilder().vertex("i0", f).letter("i0", f.in_arities.empty() ? out_port(1) : in_port(1), "&a").build();
    h.frontier_map[f.name] = {
        NetFragment{n, PortRef{"i0", f.in_arities.empty() ? out_port(1) : in_port(1)}}};
  }
  return h;
}

namespace detail {

inline void check_placeholders(const Label& source, const Net& image) {
  std::map<std::string, Port> found;
  for (const auto& [p, letter] : image.dangling)
    if (letter.size() > 1 && letter[0] == '&') {
      if (found.count(letter))
        fail(Errc::ValidationError, "duplicate placeholder " + letter + " in image");
      found[letter] = p.port;
    }
  std::size_t expected = source.in_arities.size() + source.out_arities.size();
  for (int i : source.in_arities) {
    auto it = found.find(placeholder_in(i));
    if (it == found.end() || it->second.dir != Dir::In)
      fail(Errc::ValidationError,
           "image lacks in-placeholder " + std::to_string(i) + " on an in-port");
  }
  for (int j : source.out_arities) {
    auto it = found.find(placeholder_out(j));
    if (it == found.end() || it->second.dir != Dir::Out)
      fail(Errc::ValidationError,
           "image lacks out-placeholder " + std::to_string(j) + " on an out-port");
  }
  if (found.size() != expected)
    fail(Errc::ValidationError, "image placeholders not bijective with source arities");
}

inline Net prefix_ids(const Net& n, const std::string& prefix,
                      std::map<std::string, std::string>* out_rename = nullptr) {
  Net r;
  std::map<std::string, std::string> rename;
  for (const auto& [id, l] : n.vertices) rename[id] = prefix + id;
  for (const auto& [id, l] : n.vertices) r.vertices[rename[id]] = l;
  for (const auto& [f, t] : n.edges)
    r.edges[PortRef{rename[f.vertex], f.port}] = PortRef{rename[t.vertex], t.port};
  for (const auto& [p, letter] : n.dangling) r.dangling[PortRef{rename[p.vertex], p.port}] = letter;
  if (out_rename) *out_rename = std::move(rename);
  return r;
}

}  // namespace detail

/// One fully assembled homomorphic image together with the resolution of
/// every source port to its image port (used by composition).
struct HomImage {
  Net net;
  std::map<PortRef, PortRef> port_map;
};

/// All images of t under h: each source vertex independently picks one
/// replacement from the relation, children are glued at the placeholder
/// arities, results are deduplicated by the caller.
inline std::vector<HomImage> apply_homomorphism_traced(const NetHomomorphism& h, const Net& t,
                                                       const Budget& budget = Budget::defaults()) {
  struct VertexChoice {
    std::string id;
    bool is_frontier = false;
    std::size_t options = 0;
  };
  std::vector<VertexChoice> vars;
  for (const auto& [id, l] : t.vertices) {
    VertexChoice c;
    c.id = id;
    c.is_frontier = l.kind == Label::Kind::Frontier;
    if (c.is_frontier) {
      auto it = h.frontier_map.find(l.name);
      if (it == h.frontier_map.end() || it->second.empty())
        fail(Errc::DomainGap, "no image for frontier letter " + l.name);
      c.options = it->second.size();
    } else {
      auto it = h.symbol_map.find(l.name);
      if (it == h.symbol_map.end() || it->second.empty())
        fail(Errc::DomainGap, "no image for symbol " + l.name);
      for (const Net& img : it->second) detail::check_placeholders(l, img);
      c.options = it->second.size();
    }
    vars.push_back(std::move(c));
  }
  std::vector<std::pair<PortRef, std::size_t>> letter_vars;  // dangling port -> option count
  for (const auto& [p, letter] : t.dangling) {
    auto it = h.arity_map.find(letter);
    if (it == h.arity_map.end() || it->second.empty())
      fail(Errc::DomainGap, "no image for arity letter " + letter);
    letter_vars.emplace_back(p, it->second.size());
  }

  std::size_t combos = 1;
  for (const auto& v : vars) {
    combos *= v.options;
    if (combos > budget.max_jungle_size * 64)
      fail(Errc::BudgetExceeded, "homomorphic image choice space over budget");
  }
  for (const auto& [_, n] : letter_vars) {
    combos *= n;
    if (combos > budget.max_jungle_size * 64)
      fail(Errc::BudgetExceeded, "homomorphic image choice space over budget");
  }

  std::vector<HomImage> out;
  std::vector<std::size_t> pick(vars.size(), 0);
  std::vector<std::size_t> lpick(letter_vars.size(), 0);
  for (;;) {
    // Assemble one image for the current choice vector.
    Net img;
    std::map<PortRef, PortRef> resolve;
    int copy = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const auto& vc = vars[k];
      const Label& l = t.vertices.at(vc.id);
      std::string prefix = "h" + std::to_string(copy++) + "_";
      if (vc.is_frontier) {
        const NetFragment& frag = h.frontier_map.at(l.name)[pick[k]];
        validate_fragment(frag);
        std::map<std::string, std::string> rename;
        Net piece = detail::prefix_ids(frag.net, prefix, &rename);
        PortRef attach{rename.at(frag.attach.vertex), frag.attach.port};
        Port own = l.in_arities.empty() ? out_port(1) : in_port(1);
        if (attach.port.dir != own.dir)
          fail(Errc::ValidationError, "fragment attach direction mismatch for " + l.name);
        resolve[PortRef{vc.id, own}] = attach;
        for (const auto& [id2, l2] : piece.vertices) img.vertices[id2] = l2;
        for (const auto& [f, tt] : piece.edges) img.edges[f] = tt;
        for (const auto& [p, letter] : piece.dangling) img.dangling[p] = letter;
      } else {
        const Net& tmpl = h.symbol_map.at(l.name)[pick[k]];
        std::map<std::string, std::string> rename;
        Net piece = detail::prefix_ids(tmpl, prefix, &rename);
        for (const auto& [p, letter] : piece.dangling) {
          if (letter.size() > 1 && letter[0] == '&') {
            // Map this placeholder back to the source port it stands for.
            bool is_in = letter[1] == 'i';
            int idx = std::stoi(letter.substr(2));
            resolve[PortRef{vc.id, Port{is_in ? Dir::In : Dir::Out, idx}}] = p;
          }
        }
        for (const auto& [id2, l2] : piece.vertices) img.vertices[id2] = l2;
        for (const auto& [f, tt] : piece.edges) img.edges[f] = tt;
        for (const auto& [p, letter] : piece.dangling) img.dangling[p] = letter;
      }
    }
    for (const auto& [f, tt] : t.edges) {
      PortRef a = resolve.at(f), b = resolve.at(tt);
      img.dangling.erase(a);
      img.dangling.erase(b);
      img.edges[a] = b;
    }
    for (std::size_t k = 0; k < letter_vars.size(); ++k) {
      const PortRef& p = letter_vars[k].first;
      const std::string& target = h.arity_map.at(t.dangling.at(p))[lpick[k]];
      img.dangling[resolve.at(p)] = target;
    }
    validate_net(img);
    out.push_back(HomImage{std::move(img), std::move(resolve)});
    if (out.size() > budget.max_jungle_size)
      fail(Errc::BudgetExceeded, "homomorphic image set over budget");

    // Advance the mixed-radix choice vector.
    std::size_t k = 0;
    for (; k < vars.size(); ++k) {
      if (++pick[k] < vars[k].options) break;
      pick[k] = 0;
    }
    if (k == vars.size()) {
      std::size_t m = 0;
      for (; m < letter_vars.size(); ++m) {
        if (++lpick[m] < letter_vars[m].second) break;
        lpick[m] = 0;
      }
      if (m == letter_vars.size()) break;
    }
  }
  return out;
}

inline Jungle apply_homomorphism(const NetHomomorphism& h, const Net& t,
                                 const Budget& budget = Budget::defaults()) {
  Jungle out;
  for (const HomImage& img : apply_homomorphism_traced(h, t, budget)) out.insert(img.net);
  return out;
}

/// Net substitution: ranked letters and arity letters untouched, each
/// frontier letter replaced by one designated fragment. Fragment vertices
/// whose ids already exist in the host are identified with them, which is how
/// loop-forming (feedbacking) images reach back into the host.
struct NetSubstitution {
  std::map<std::string, NetFragment> frontier_map;

  bool operator==(const NetSubstitution& o) const {
    if (frontier_map.size() != o.frontier_map.size()) return false;
    for (const auto& [x, f] : frontier_map) {
      auto it = o.frontier_map.find(x);
      if (it == o.frontier_map.end()) return false;
      if (!(f.net == it->second.net) || f.attach != it->second.attach) return false;
    }
    return true;
  }
};

inline Net apply_substitution(const NetSubstitution& f, const Net& t) {
  Net out;
  for (const auto& [id, l] : t.vertices)
    if (l.kind == Label::Kind::Ranked) out.vertices[id] = l;
  std::set<std::string> frontier_ids;
  for (const auto& [id, l] : t.vertices)
    if (l.kind == Label::Kind::Frontier) {
      if (!f.frontier_map.count(l.name))
        fail(Errc::DomainGap, "no substitution image for frontier letter " + l.name);
      frontier_ids.insert(id);
    }
  for (const auto& [e_from, e_to] : t.edges)
    if (!frontier_ids.count(e_from.vertex) && !frontier_ids.count(e_to.vertex))
      out.edges[e_from] = e_to;
  for (const auto& [p, letter] : t.dangling)
    if (!frontier_ids.count(p.vertex)) out.dangling[p] = letter;

  int occurrence = 0;
  for (const std::string& id : frontier_ids) {
    const Label& l = t.vertices.at(id);
    const NetFragment& frag = f.frontier_map.at(l.name);
    validate_fragment(frag);
    std::string prefix = "s" + std::to_string(occurrence++) + "_";
    std::map<std::string, std::string> rename;
    for (const auto& [fid, fl] : frag.net.vertices) {
      auto host_it = t.vertices.find(fid);
      if (host_it != t.vertices.end() && host_it->second.kind == Label::Kind::Ranked) {
        if (!(host_it->second == fl))
          fail(Errc::ValidationError, "feedback vertex " + fid + " label mismatch");
        rename[fid] = fid;  // identified with the host vertex
      } else {
        rename[fid] = prefix + fid;
      }
    }
    for (const auto& [fid, fl] : frag.net.vertices) out.vertices[rename[fid]] = fl;
    for (const auto& [e_from, e_to] : frag.net.edges) {
      PortRef from{rename[e_from.vertex], e_from.port};
      PortRef to{rename[e_to.vertex], e_to.port};
      auto [it, fresh] = out.edges.emplace(from, to);
      if (!fresh && it->second != to)
        fail(Errc::DuplicatePortOccupancy, "feedback image occupies a taken port");
      out.dangling.erase(from);
      out.dangling.erase(to);
    }
    for (const auto& [p, letter] : frag.net.dangling) {
      PortRef target{rename[p.vertex], p.port};
      if (p == frag.attach) continue;  // handled below
      if (!out.dangling.count(target) && !out.edges.count(target)) {
        // A feedback-identified port may already be occupied by the host.
        bool occupied = false;
        if (target.port.dir == Dir::In)
          for (const auto& [ef, et] : out.edges)
            if (et == target) occupied = true;
        if (!occupied) out.dangling[target] = letter;
      }
    }
    PortRef attach{rename[frag.attach.vertex], frag.attach.port};
    Port own = l.in_arities.empty() ? out_port(1) : in_port(1);
    if (attach.port.dir != own.dir)
      fail(Errc::ValidationError, "fragment attach direction mismatch for " + l.name);
    PortRef own_ref{id, own};
    auto peer = t.peer(own_ref);
    if (peer && !frontier_ids.count(peer->vertex)) {
      if (own.dir == Dir::Out)
        out.edges[attach] = *peer;
      else
        out.edges[*peer] = attach;
    } else if (peer) {
      fail(Errc::ValidationError, "frontier letters attached to each other are not substitutable");
    } else {
      out.dangling[attach] = t.dangling.at(own_ref);
    }
  }
  // Edges win over leftover interface letters (feedback images may occupy
  // ports the host or another fragment copy listed as dangling).
  for (const auto& [f_p, t_p] : out.edges) {
    out.dangling.erase(f_p);
    out.dangling.erase(t_p);
  }
  if (t.root && out.vertices.count(*t.root)) out.root = t.root;
  validate_net(out);
  return out;
}

/// Relational composition h2 after h1 as one homomorphism: every h1 image is
/// pushed through h2 (placeholders pass through untouched).
inline NetHomomorphism compose_homomorphism(const NetHomomorphism& h2,
                                            const NetHomomorphism& h1,
                                            const Budget& budget = Budget::defaults()) {
  NetHomomorphism h2x = h2;  // extended with identity on placeholder letters
  NetHomomorphism out;
  for (const auto& [sym, images] : h1.symbol_map) {
    for (const Net& img : images) {
      for (const auto& [p, letter] : img.dangling)
        if (letter.size() > 1 && letter[0] == '&') h2x.arity_map[letter] = {letter};
      for (const HomImage& pushed : apply_homomorphism_traced(h2x, img, budget))
        out.symbol_map[sym].push_back(pushed.net);
    }
  }
  for (const auto& [x, frags] : h1.frontier_map) {
    for (const NetFragment& frag : frags) {
      NetHomomorphism h2y = h2x;
      const std::string keep = frag.net.dangling.at(frag.attach);
      h2y.arity_map[keep] = {keep};
      for (const HomImage& pushed : apply_homomorphism_traced(h2y, frag.net, budget))
        out.frontier_map[x].push_back(NetFragment{pushed.net, pushed.port_map.at(frag.attach)});
    }
  }
  for (const auto& [xi, outs] : h1.arity_map)
    for (const std::string& mid : outs) {
      auto it = h2.arity_map.find(mid);
      if (it == h2.arity_map.end()) fail(Errc::DomainGap, "arity letter " + mid + " outside h2");
      for (const std::string& target : it->second) out.arity_map[xi].push_back(target);
    }
  return out;
}

}  // namespace netrw
