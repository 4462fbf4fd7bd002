#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "netrw/base.hpp"
#include "netrw/jungle.hpp"
#include "netrw/morphism.hpp"
#include "netrw/net.hpp"
#include "netrw/subnet.hpp"

namespace netrw {

/// One rewrite rule: left/right nets over the same arity-letter interface,
/// frontier letters for captured material, declared right-side substitutions
/// G_rho (empty = reuse the captures found on the left).
struct RulePreform {
  std::string name;
  Net left;
  Net right;
  std::vector<NetSubstitution> right_subs;

  std::set<std::string> left_sub_domain() const {
    std::set<std::string> out;
    for (const auto& [_, l] : left.vertices)
      if (l.kind == Label::Kind::Frontier) out.insert(l.name);
    return out;
  }
  std::set<std::string> right_letters() const {
    std::set<std::string> out;
    for (const auto& [_, l] : right.vertices)
      if (l.kind == Label::Kind::Frontier) out.insert(l.name);
    return out;
  }
};

/// Interface letters of a rule side: arity letters dangling on ranked
/// vertices. These pair up left/right ports during environment reattachment.
inline std::map<std::string, PortRef> side_interface(const Net& side) {
  std::map<std::string, PortRef> out;
  for (const auto& [p, letter] : side.dangling) {
    if (side.vertices.at(p.vertex).kind != Label::Kind::Ranked) continue;
    if (out.count(letter))
      fail(Errc::ValidationError, "interface letter " + letter + " used twice on one side");
    out[letter] = p;
  }
  return out;
}

inline void validate_rule(const RulePreform& r) {
  validate_net(r.left);
  validate_net(r.right);
  if (r.left.empty()) fail(Errc::ValidationError, "rule " + r.name + " has an empty left side");
  std::set<std::string> declared;
  for (const NetSubstitution& g : r.right_subs)
    for (const auto& [x, _] : g.frontier_map) declared.insert(x);
  std::set<std::string> lefts = r.left_sub_domain();
  for (const std::string& y : r.right_letters())
    if (!declared.count(y) && !lefts.count(y))
      fail(Errc::ValidationError,
           "rule " + r.name + ": right-side letter " + y + " has no source");
  auto li = side_interface(r.left);
  auto ri = side_interface(r.right);
  for (const auto& [letter, lp] : li) {
    auto it = ri.find(letter);
    if (it != ri.end() && it->second.port.dir != lp.port.dir)
      fail(Errc::ValidationError,
           "rule " + r.name + ": interface letter " + letter + " changes direction");
  }
}

struct CustomCondition {
  std::string kind;  // "block-partitionable" is the one built-in kind
  Jungle payload;
};

struct ConditionSet {
  std::optional<std::vector<std::string>> application_order;
  bool instance_sensitive = false;
  std::map<std::string, std::set<std::size_t>> binding;  // rule -> allowed right_subs indices
  std::vector<CustomCondition> custom;
};

struct Rns {
  std::vector<RulePreform> rules;
  ConditionSet conditions;
};

inline Rns make_rns(std::vector<RulePreform> rules, ConditionSet conditions = {}) {
  for (const RulePreform& r : rules) validate_rule(r);
  std::set<std::string> names;
  for (const RulePreform& r : rules)
    if (!names.insert(r.name).second)
      fail(Errc::ValidationError, "duplicate rule name " + r.name);
  if (conditions.application_order) {
    if (conditions.application_order->size() != rules.size())
      fail(Errc::ValidationError, "application order must cover all rule names");
    for (const std::string& n : *conditions.application_order)
      if (!names.count(n)) fail(Errc::ValidationError, "application order names unknown rule " + n);
  }
  Rns out;
  out.rules = std::move(rules);
  out.conditions = std::move(conditions);
  return out;
}

/// A found redex: rule, occurrence position (apex image plus captures), and
/// the left-side substitution assignment. The embedding and per-capture data
/// drive the replacement.
struct MatchRecord {
  std::string rule;
  Position position;
  NetSubstitution assignment;

  std::map<std::string, std::string> embedding;  // apex vertex -> host vertex
  struct Capture {
    std::string letter;
    std::set<std::string> verts;
    PortRef host_attach;
  };
  std::vector<Capture> captures;
};

namespace detail {

/// Exact partition of the host's payload-alphabet material (minus `exclude`)
/// into induced copies of payload members.
inline bool block_partitionable(const Net& host, const std::set<std::string>& exclude,
                                const Jungle& payload) {
  std::set<std::string> alphabet = letter_set(payload);
  std::set<std::string> remaining;
  for (const auto& [id, l] : host.vertices)
    if (!exclude.count(id) && l.kind == Label::Kind::Ranked && alphabet.count(l.name))
      remaining.insert(id);
  std::vector<std::vector<std::set<std::string>>> member_positions;
  for (const auto& [_, m] : payload) {
    std::vector<std::set<std::string>> occ;
    for (const Position& p : positions_of(host, m)) occ.push_back(p.vertex_set());
    member_positions.push_back(std::move(occ));
  }
  std::map<std::set<std::string>, bool> memo;
  std::function<bool(std::set<std::string>)> solve = [&](std::set<std::string> todo) -> bool {
    if (todo.empty()) return true;
    auto it = memo.find(todo);
    if (it != memo.end()) return it->second;
    const std::string& anchor = *todo.begin();
    bool ok = false;
    for (const auto& occs : member_positions) {
      for (const auto& o : occs) {
        if (!o.count(anchor)) continue;
        bool inside = true;
        for (const std::string& v : o)
          if (!todo.count(v)) {
            inside = false;
            break;
          }
        if (!inside) continue;
        std::set<std::string> rest;
        std::set_difference(todo.begin(), todo.end(), o.begin(), o.end(),
                            std::inserter(rest, rest.begin()));
        if (solve(std::move(rest))) {
          ok = true;
          break;
        }
      }
      if (ok) break;
    }
    memo[todo] = ok;
    return ok;
  };
  return solve(std::move(remaining));
}

inline bool conditions_allow(const Rns& r, const Net& host, const MatchRecord& m) {
  for (const CustomCondition& c : r.conditions.custom) {
    if (c.kind == "block-partitionable") {
      if (!block_partitionable(host, m.position.vertex_set(), c.payload)) return false;
    } else {
      fail(Errc::ValidationError, "unknown condition kind " + c.kind);
    }
  }
  return true;
}

/// All injective label-strict embeddings of pattern's ranked part into host.
inline void enumerate_embeddings(const Net& host, const Net& pattern_apex,
                                 std::size_t cap,
                                 const std::function<void(const std::map<std::string, std::string>&)>& emit) {
  std::vector<std::string> pverts = pattern_apex.vertex_ids();
  if (pverts.empty()) return;
  std::vector<std::string> hverts = host.vertex_ids();
  std::map<std::string, std::string> assign;
  std::set<std::string> used;
  std::size_t count = 0;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (count > cap) fail(Errc::BudgetExceeded, "match embedding search over budget");
    if (k == pverts.size()) {
      ++count;
      emit(assign);
      return;
    }
    const std::string& pv = pverts[k];
    const Label& pl = pattern_apex.vertices.at(pv);
    for (const std::string& hv : hverts) {
      if (used.count(hv)) continue;
      if (!(host.vertices.at(hv) == pl)) continue;
      // Partial consistency: every pattern edge with both ends assigned must
      // exist in the host, in the same ports.
      assign[pv] = hv;
      used.insert(hv);
      bool ok = true;
      for (const auto& [f, t] : pattern_apex.edges) {
        auto fi = assign.find(f.vertex), ti = assign.find(t.vertex);
        if (fi == assign.end() || ti == assign.end()) continue;
        auto he = host.edges.find(PortRef{fi->second, f.port});
        if (he == host.edges.end() || he->second != PortRef{ti->second, t.port}) {
          ok = false;
          break;
        }
      }
      if (ok) go(k + 1);
      assign.erase(pv);
      used.erase(hv);
    }
  };
  go(0);
}

inline std::set<std::string> reach_avoiding(const Net& host, const std::string& start,
                                            const std::set<std::string>& avoid) {
  auto adj = neighbor_map(host);
  std::set<std::string> seen{start};
  std::vector<std::string> stack{start};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    for (const std::string& w : adj[v])
      if (!avoid.count(w) && seen.insert(w).second) stack.push_back(w);
  }
  return seen;
}

}  // namespace detail

/// All applicable redexes of r in s, respecting the condition set. With an
/// application order only the first rule owning a match contributes.
inline std::vector<MatchRecord> find_matches(const Rns& r, const Net& s,
                                             const Budget& budget = Budget::defaults()) {
  std::vector<const RulePreform*> order;
  if (r.conditions.application_order) {
    for (const std::string& n : *r.conditions.application_order)
      for (const RulePreform& rule : r.rules)
        if (rule.name == n) order.push_back(&rule);
  } else {
    for (const RulePreform& rule : r.rules) order.push_back(&rule);
  }

  std::vector<MatchRecord> out;
  for (const RulePreform* rule : order) {
    std::vector<MatchRecord> found;
    Net pattern_apex = apex(rule->left);

    auto try_candidate = [&](const std::map<std::string, std::string>& embedding) {
      std::set<std::string> apex_img;
      for (const auto& [_, hv] : embedding) apex_img.insert(hv);
      // Induced check: host edges inside the image must all be pattern edges.
      std::size_t internal = 0;
      for (const auto& [f, t] : s.edges)
        if (apex_img.count(f.vertex) && apex_img.count(t.vertex)) internal++;
      if (internal != pattern_apex.edges.size()) return;

      MatchRecord m;
      m.rule = rule->name;
      m.embedding = embedding;
      std::set<std::string> occ = apex_img;
      bool viable = true;
      for (const auto& [fid, fl] : rule->left.vertices) {
        if (fl.kind != Label::Kind::Frontier) continue;
        Port own = fl.in_arities.empty() ? out_port(1) : in_port(1);
        auto peer = rule->left.peer(PortRef{fid, own});
        if (!peer) continue;  // bare letter, handled by the empty-apex branch
        PortRef host_port{embedding.at(peer->vertex), peer->port};
        auto host_peer = s.peer(host_port);
        if (!host_peer || apex_img.count(host_peer->vertex)) {
          viable = false;  // nothing to capture (empty attachments not declared)
          break;
        }
        std::set<std::string> comp = detail::reach_avoiding(s, host_peer->vertex, apex_img);
        MatchRecord::Capture cap;
        cap.letter = fl.name;
        cap.verts = comp;
        cap.host_attach = *host_peer;
        m.captures.push_back(cap);
        occ.insert(comp.begin(), comp.end());
      }
      if (!viable) return;
      for (const MatchRecord::Capture& cap : m.captures) {
        NetFragment frag{induced_subnet(s, cap.verts), cap.host_attach};
        auto it = m.assignment.frontier_map.find(cap.letter);
        if (it == m.assignment.frontier_map.end())
          m.assignment.frontier_map[cap.letter] = frag;
      }
      // Soundness: the substituted left side must be the occurrence.
      Net subst_left;
      try {
        subst_left = apply_substitution(m.assignment, rule->left);
      } catch (const Error&) {
        return;
      }
      if (canonical_form(subst_left) != canonical_form(induced_subnet(s, occ))) return;
      m.position = Position::of_vertices(s, occ);
      if (!detail::conditions_allow(r, s, m)) return;
      found.push_back(std::move(m));
    };

    if (pattern_apex.empty()) {
      // Bare frontier letter: a wildcard matching every connected subnet.
      const Label* letter = nullptr;
      for (const auto& [_, l] : rule->left.vertices) letter = &l;
      for (const auto& subset : detail::connected_subsets(s, s.size(), budget.max_jungle_size * 8)) {
        MatchRecord m;
        m.rule = rule->name;
        Net frag_net = induced_subnet(s, subset);
        PortRef attach;
        if (!frag_net.dangling.empty())
          attach = frag_net.dangling.begin()->first;
        else
          continue;  // a closed component offers no attachment port
        MatchRecord::Capture cap;
        cap.letter = letter->name;
        cap.verts = subset;
        cap.host_attach = attach;
        m.captures.push_back(cap);
        m.assignment.frontier_map[letter->name] = NetFragment{frag_net, attach};
        m.position = Position::of_vertices(s, subset);
        if (detail::conditions_allow(r, s, m)) found.push_back(std::move(m));
      }
    } else {
      detail::enumerate_embeddings(s, pattern_apex, budget.max_jungle_size * 64, try_candidate);
    }

    std::sort(found.begin(), found.end(), [](const MatchRecord& a, const MatchRecord& b) {
      if (a.rule != b.rule) return a.rule < b.rule;
      if (a.position != b.position) return a.position < b.position;
      return a.embedding < b.embedding;
    });
    out.insert(out.end(), found.begin(), found.end());
    if (r.conditions.application_order && !out.empty()) break;
  }
  return out;
}

namespace detail {

struct SubstCopyTrace {
  // letter -> rename map of the first instantiated copy of that letter.
  std::map<std::string, std::map<std::string, std::string>> first_copy;
};

/// apply_substitution specialized for rule replacement: preserves foreign ids
/// (feedback into the remaining host) and reports the rename map of the first
/// copy per letter so environment edges into captures can follow.
inline Net instantiate_right(const NetSubstitution& g, const Net& right,
                             SubstCopyTrace* trace) {
  Net out;
  for (const auto& [id, l] : right.vertices)
    if (l.kind == Label::Kind::Ranked) out.vertices[id] = l;
  std::set<std::string> frontier_ids;
  for (const auto& [id, l] : right.vertices)
    if (l.kind == Label::Kind::Frontier) {
      if (!g.frontier_map.count(l.name))
        fail(Errc::DomainGap, "no substitution image for frontier letter " + l.name);
      frontier_ids.insert(id);
    }
  for (const auto& [f, t] : right.edges)
    if (!frontier_ids.count(f.vertex) && !frontier_ids.count(t.vertex)) out.edges[f] = t;
  for (const auto& [p, letter] : right.dangling)
    if (!frontier_ids.count(p.vertex)) out.dangling[p] = letter;

  int occurrence = 0;
  for (const std::string& id : frontier_ids) {
    const Label& l = right.vertices.at(id);
    const NetFragment& frag = g.frontier_map.at(l.name);
    validate_fragment(frag);
    std::string prefix = "r" + std::to_string(occurrence++) + "_";
    std::map<std::string, std::string> rename;
    for (const auto& [fid, fl] : frag.net.vertices) {
      auto host_it = right.vertices.find(fid);
      if (host_it != right.vertices.end() && host_it->second.kind == Label::Kind::Ranked)
        rename[fid] = fid;
      else
        rename[fid] = prefix + fid;
    }
    if (trace && !trace->first_copy.count(l.name)) trace->first_copy[l.name] = rename;
    for (const auto& [fid, fl] : frag.net.vertices) out.vertices[rename[fid]] = fl;
    for (const auto& [f, t] : frag.net.edges) {
      PortRef from{rename[f.vertex], f.port};
      PortRef to{rename[t.vertex], t.port};
      auto [it, fresh] = out.edges.emplace(from, to);
      if (!fresh && it->second != to)
        fail(Errc::DuplicatePortOccupancy, "image occupies a taken port");
    }
    for (const auto& [p, letter] : frag.net.dangling) {
      if (p == frag.attach) continue;
      out.dangling.emplace(PortRef{rename[p.vertex], p.port}, letter);
    }
    PortRef attach{rename[frag.attach.vertex], frag.attach.port};
    Port own = l.in_arities.empty() ? out_port(1) : in_port(1);
    if (attach.port.dir != own.dir)
      fail(Errc::ValidationError, "fragment attach direction mismatch for " + l.name);
    PortRef own_ref{id, own};
    auto peer = right.peer(own_ref);
    if (peer && !frontier_ids.count(peer->vertex)) {
      if (own.dir == Dir::Out)
        out.edges[attach] = *peer;
      else
        out.edges[*peer] = attach;
    } else if (peer) {
      fail(Errc::ValidationError, "frontier letters attached to each other on a right side");
    } else {
      out.dangling[attach] = right.dangling.at(own_ref);
    }
  }
  for (const auto& [f, t] : out.edges) {
    out.dangling.erase(f);
    out.dangling.erase(t);
  }
  // Validation happens after the merge into the host remainder; the
  // instantiated right side alone may reference feedback vertices.
  return out;
}

}  // namespace detail

/// Replace one redex with (right)g inside the host. Environment edges follow
/// shared interface letters; edges into captures follow the first copy of the
/// reused letter. A live environment edge with no target raises
/// DanglingEnvironment.
inline Net apply_match(const Net& host, const RulePreform& rule, const MatchRecord& m,
                       const NetSubstitution* declared_g) {
  std::set<std::string> occ = m.position.vertex_set();

  // Effective right substitution: declared images override captures.
  NetSubstitution geff;
  for (const std::string& y : rule.right_letters()) {
    if (declared_g) {
      auto it = declared_g->frontier_map.find(y);
      if (it != declared_g->frontier_map.end()) {
        geff.frontier_map[y] = it->second;
        continue;
      }
    }
    auto cap = m.assignment.frontier_map.find(y);
    if (cap == m.assignment.frontier_map.end())
      fail(Errc::DomainGap, "right-side letter " + y + " has no image");
    geff.frontier_map[y] = cap->second;
  }

  detail::SubstCopyTrace trace;
  Net rhs = detail::instantiate_right(geff, rule.right, &trace);

  // Remainder of the host.
  Net out;
  for (const auto& [id, l] : host.vertices)
    if (!occ.count(id)) out.vertices[id] = l;
  for (const auto& [f, t] : host.edges)
    if (!occ.count(f.vertex) && !occ.count(t.vertex)) out.edges[f] = t;
  for (const auto& [p, letter] : host.dangling)
    if (!occ.count(p.vertex)) out.dangling[p] = letter;

  // Merge the instantiated right side (ids were chosen fresh or deliberately
  // equal to remaining host ids for feedback).
  for (const auto& [id, l] : rhs.vertices) {
    auto [it, fresh] = out.vertices.emplace(id, l);
    if (!fresh && !(it->second == l))
      fail(Errc::ValidationError, "replacement vertex " + id + " conflicts with host");
  }
  for (const auto& [f, t] : rhs.edges) {
    auto [it, fresh] = out.edges.emplace(f, t);
    if (!fresh && it->second != t)
      fail(Errc::DuplicatePortOccupancy, "replacement occupies a taken port");
  }
  for (const auto& [p, letter] : rhs.dangling) out.dangling.emplace(p, letter);

  // Reattach environment edges crossing into the occurrence.
  auto left_interface = side_interface(rule.left);
  std::map<PortRef, std::string> left_port_to_letter;
  for (const auto& [letter, p] : left_interface)
    left_port_to_letter[PortRef{m.embedding.count(p.vertex) ? m.embedding.at(p.vertex) : p.vertex,
                                p.port}] = letter;
  auto right_interface = side_interface(rule.right);

  auto resolve_inside = [&](const PortRef& inside) -> PortRef {
    auto it = left_port_to_letter.find(inside);
    if (it != left_port_to_letter.end()) {
      auto rp = right_interface.find(it->second);
      if (rp == right_interface.end())
        fail(Errc::DanglingEnvironment,
             "environment needs interface letter " + it->second + " on the right side");
      return rp->second;
    }
    // Edge into a capture: follow the first copy of the letter that reused it.
    for (const MatchRecord::Capture& cap : m.captures) {
      if (!cap.verts.count(inside.vertex)) continue;
      auto tc = trace.first_copy.find(cap.letter);
      if (tc == trace.first_copy.end())
        fail(Errc::DanglingEnvironment,
             "environment reaches the dropped capture " + cap.letter);
      auto rn = tc->second.find(inside.vertex);
      if (rn == tc->second.end())
        fail(Errc::DanglingEnvironment, "capture copy lacks vertex " + inside.vertex);
      return PortRef{rn->second, inside.port};
    }
    fail(Errc::DanglingEnvironment, "environment edge into an unmapped occurrence port");
  };

  for (const auto& [f, t] : host.edges) {
    bool fin = occ.count(f.vertex) > 0, tin = occ.count(t.vertex) > 0;
    if (fin == tin) continue;
    PortRef from = f, to = t;
    if (fin) from = resolve_inside(f);
    if (tin) to = resolve_inside(t);
    auto [it, fresh] = out.edges.emplace(from, to);
    if (!fresh && it->second != to)
      fail(Errc::DanglingEnvironment, "environment reattachment collides at " + from.vertex);
    out.dangling.erase(from);
    out.dangling.erase(to);
  }
  for (const auto& [f, t] : out.edges) {
    out.dangling.erase(f);
    out.dangling.erase(t);
  }
  if (host.root && out.vertices.count(*host.root)) out.root = host.root;
  validate_net(out);
  return out;
}

namespace detail {

struct StepOutcome {
  Jungle jungle;
  bool clipped = false;  // some result exceeded max_net_size
};

inline StepOutcome rewrite_step_impl(const Rns& r, const Jungle& S, const Budget& budget) {
  StepOutcome out;
  for (const auto& [_, s] : S) {
    for (const MatchRecord& m : find_matches(r, s, budget)) {
      const RulePreform* rule = nullptr;
      for (const RulePreform& cand : r.rules)
        if (cand.name == m.rule) rule = &cand;
      std::vector<const NetSubstitution*> gs;
      if (rule->right_subs.empty()) {
        gs.push_back(nullptr);
      } else {
        auto allowed = r.conditions.binding.find(rule->name);
        for (std::size_t i = 0; i < rule->right_subs.size(); ++i) {
          if (allowed != r.conditions.binding.end() && !allowed->second.count(i)) continue;
          gs.push_back(&rule->right_subs[i]);
        }
      }
      for (const NetSubstitution* g : gs) {
        Net result = apply_match(s, *rule, m, g);
        if (result.size() > budget.max_net_size) {
          out.clipped = true;
          continue;
        }
        out.jungle.insert(result);
        if (out.jungle.size() > budget.max_jungle_size)
          fail(Errc::BudgetExceeded, "rewrite produced more nets than the jungle budget");
      }
    }
  }
  return out;
}

}  // namespace detail

/// One parallel rewrite layer: the union over members, applicable matches and
/// right substitutions of the replacement results. Unmatched members produce
/// nothing (survival of irreducible nets is closure's reflexive layer).
inline Jungle rewrite_step(const Rns& r, const Jungle& S,
                           const Budget& budget = Budget::defaults()) {
  detail::StepOutcome out = detail::rewrite_step_impl(r, S, budget);
  if (out.clipped) fail(Errc::BudgetExceeded, "rewrite result exceeded the net size budget");
  return out.jungle;
}

struct ClosureResult {
  Jungle jungle;
  bool exhausted = false;
};

/// Budgeted catenation closure: everything reachable in 0..max_steps layers.
inline ClosureResult closure(const Rns& r, const Jungle& S,
                             const Budget& budget = Budget::defaults()) {
  ClosureResult res;
  res.jungle = S;
  Jungle frontier = S;
  for (std::size_t step = 0; step < budget.max_steps; ++step) {
    if (frontier.empty()) return res;
    detail::StepOutcome produced = detail::rewrite_step_impl(r, frontier, budget);
    if (produced.clipped) res.exhausted = true;
    Jungle next;
    for (const auto& [k, n] : produced.jungle) {
      if (res.jungle.contains_key(k)) continue;
      if (res.jungle.size() + next.size() >= budget.max_jungle_size) {
        res.exhausted = true;
        break;
      }
      next.insert(n);
    }
    res.jungle.merge(next);
    frontier = std::move(next);
  }
  if (!frontier.empty()) {
    // The step budget bound before a fixpoint was reached; check whether the
    // frontier could still move.
    detail::StepOutcome probe = detail::rewrite_step_impl(r, frontier, budget);
    if (probe.clipped) res.exhausted = true;
    for (const auto& [k, _] : probe.jungle)
      if (!res.jungle.contains_key(k)) {
        res.exhausted = true;
        break;
      }
  }
  return res;
}

/// Reachable irreducible nets: closure intersected with IRR(r).
inline ClosureResult normal_forms(const Rns& r, const Jungle& S,
                                  const Budget& budget = Budget::defaults()) {
  ClosureResult cl = closure(r, S, budget);
  ClosureResult out;
  out.exhausted = cl.exhausted;
  for (const auto& [_, n] : cl.jungle)
    if (find_matches(r, n, budget).empty()) out.jungle.insert(n);
  return out;
}

struct RnsFlags {
  bool feedbacking = false;
  bool totally_feedbacking = false;
  bool innerly_feedbacking = false;
  bool self_feedbacking = false;
  bool environmentally_saving = false;
  bool thoroughly_feedbacking = false;
  bool orn_saving = false;
  bool instance_sensitive = false;
};

/// ORN of a rule side: dangling arity positions of the side's apex plus the
/// linkage connections from its frontier attachments.
inline std::size_t side_orn(const Net& side) {
  std::set<std::string> ranked_ids;
  for (const auto& [id, l] : side.vertices)
    if (l.kind == Label::Kind::Ranked) ranked_ids.insert(id);
  if (ranked_ids.empty()) return 0;
  LinkStats st = link_stats(induced_subnet(side, ranked_ids), side,
                            Position::of_vertices(side, ranked_ids));
  return st.orn;
}

inline RnsFlags classify_rns(const Rns& r, const Net& t,
                             const Budget& budget = Budget::defaults()) {
  RnsFlags f;
  Jungle t_enc = enclosures(t);
  auto overlaps_t = [&](const Net& img) {
    for (const auto& [k, _] : enclosures(img))
      if (t_enc.contains_key(k)) return true;
    return false;
  };
  auto inside_t = [&](const Net& img) { return t_enc.contains(img); };

  bool any_rule_applicable = false;
  bool all_applicable_feedback = true, all_images_feedback = true;
  bool all_applicable_innerly = true;
  bool all_rules_feedback = true;
  for (const RulePreform& rule : r.rules) {
    bool applicable = false;
    for (const MatchRecord& m : find_matches(r, t, budget))
      if (m.rule == rule.name) applicable = true;
    bool some_img_overlap = rule.right_subs.empty();  // capture reuse stays inside t
    bool all_img_overlap = true, all_img_inside = rule.right_subs.empty();
    bool any_img = false;
    bool first = true;
    for (const NetSubstitution& g : rule.right_subs)
      for (const auto& [_, frag] : g.frontier_map) {
        any_img = true;
        bool ov = overlaps_t(frag.net);
        some_img_overlap = some_img_overlap || ov;
        all_img_overlap = all_img_overlap && ov;
        bool in = inside_t(frag.net);
        all_img_inside = first ? in : (all_img_inside && in);
        first = false;
      }
    if (!any_img) {
      all_img_overlap = true;
      all_img_inside = true;
    }
    if (applicable) {
      any_rule_applicable = true;
      all_applicable_feedback = all_applicable_feedback && some_img_overlap;
      all_images_feedback = all_images_feedback && all_img_overlap;
      all_applicable_innerly = all_applicable_innerly && all_img_inside;
    }
    all_rules_feedback = all_rules_feedback && some_img_overlap;
  }
  // The positive flags assert overlap actually happens; the totally/innerly
  // variants are universally quantified over applicable matches and hold
  // vacuously when nothing applies.
  f.feedbacking = any_rule_applicable && all_applicable_feedback;
  f.totally_feedbacking = all_applicable_feedback && all_images_feedback;
  f.innerly_feedbacking = all_applicable_innerly;
  f.self_feedbacking = f.feedbacking;  // t is the applicant here
  f.thoroughly_feedbacking = all_rules_feedback && !r.rules.empty();

  // Environment saving: letter material outside the rule sides must agree
  // before and after each application.
  bool env_ok = f.innerly_feedbacking;
  if (env_ok) {
    std::multiset<std::string> lt = letter_multiset(t);
    for (const MatchRecord& m : find_matches(r, t, budget)) {
      const RulePreform* rule = nullptr;
      for (const RulePreform& cand : r.rules)
        if (cand.name == m.rule) rule = &cand;
      std::multiset<std::string> l_left = letter_multiset(apex(rule->left));
      std::multiset<std::string> l_right = letter_multiset(apex(rule->right));
      auto minus = [](std::multiset<std::string> a, const std::multiset<std::string>& b) {
        for (const std::string& x : b) {
          auto it = a.find(x);
          if (it != a.end()) a.erase(it);
        }
        return a;
      };
      std::vector<const NetSubstitution*> gs;
      if (rule->right_subs.empty())
        gs.push_back(nullptr);
      else
        for (const NetSubstitution& g : rule->right_subs) gs.push_back(&g);
      for (const NetSubstitution* g : gs) {
        Net u;
        try {
          u = apply_match(t, *rule, m, g);
        } catch (const Error&) {
          continue;
        }
        if (minus(letter_multiset(u), l_right) != minus(lt, l_left)) env_ok = false;
      }
    }
  }
  f.environmentally_saving = env_ok;

  f.orn_saving = true;
  for (const RulePreform& rule : r.rules)
    if (side_orn(rule.left) != side_orn(rule.right)) f.orn_saving = false;

  f.instance_sensitive = r.conditions.instance_sensitive;
  for (const RulePreform& rule : r.rules)
    if (!rule.right_subs.empty()) f.instance_sensitive = true;
  return f;
}

struct UprnsCondition {
  bool pass = true;
  std::string witness;
};

struct UprnsReport {
  UprnsCondition saving;          // (i)
  UprnsCondition letters_step;    // (ii), one-step reading
  UprnsCondition letters_closure; // (ii), normal-form reading
  UprnsCondition right_singleton; // (iii) first half
  UprnsCondition injective;       // (iii) second half
  bool pass() const {
    return saving.pass && letters_step.pass && letters_closure.pass &&
           right_singleton.pass && injective.pass;
  }
};

inline UprnsReport validate_uprns(const Rns& w, const Jungle& c,
                                  const Budget& budget = Budget::defaults()) {
  UprnsReport rep;
  for (const auto& [key, t] : c) {
    RnsFlags f = classify_rns(w, t, budget);
    if (!(f.thoroughly_feedbacking && f.totally_feedbacking && f.environmentally_saving &&
          f.orn_saving)) {
      rep.saving.pass = false;
      rep.saving.witness = key;
      break;
    }
  }
  std::set<std::string> lc = letter_set(c);
  auto disjoint = [&](const Jungle& img, UprnsCondition& cond) {
    for (const std::string& x : letter_set(img))
      if (lc.count(x)) {
        cond.pass = false;
        cond.witness = x;
        return;
      }
  };
  disjoint(rewrite_step(w, c, budget), rep.letters_step);
  disjoint(normal_forms(w, c, budget).jungle, rep.letters_closure);

  std::set<std::string> lefts, rights;
  for (const RulePreform& rule : w.rules) {
    std::set<std::string> rl = letter_set(apex(rule.right));
    if (rl.size() != 1 || lc.count(*rl.begin())) {
      rep.right_singleton.pass = false;
      rep.right_singleton.witness = rule.name;
    }
    if (!lefts.insert(canonical_form(rule.left)).second ||
        !rights.insert(canonical_form(rule.right)).second) {
      rep.injective.pass = false;
      rep.injective.witness = rule.name;
    }
  }
  return rep;
}

}  // namespace netrw
