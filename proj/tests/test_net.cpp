#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "netrw/jungle.hpp"
#include "netrw/subnet.hpp"

using namespace netrw;

TEST_CASE("single vertex with all ports dangling is a valid net") {
  Net n = th::single(th::sym_a());
  REQUIRE(n.size() == 1);
  REQUIRE(n.dangling.size() == 3);
}

TEST_CASE("self-loop with remaining port dangling is a valid net") {
  Net n = NetBuilder().vertex("v1", th::sym_a()).edge("v1", 1, "v1", 1).build();
  REQUIRE(n.edges.size() == 1);
  REQUIRE(n.dangling.size() == 1);  // only in2 is left open
}

TEST_CASE("two edges into one port are rejected") {
  std::map<std::string, Label> vs{{"v1", th::sym_a()}, {"v2", th::sym_b()}, {"v3", th::sym_b()}};
  std::map<PortRef, PortRef> es{
      {{"v2", out_port(1)}, {"v1", in_port(1)}},
      {{"v3", out_port(1)}, {"v1", in_port(1)}},
  };
  std::map<PortRef, std::string> dg{
      {{"v1", in_port(2)}, "p1"}, {{"v1", out_port(1)}, "p2"},
      {{"v2", in_port(1)}, "p3"}, {{"v3", in_port(1)}, "p4"},
  };
  try {
    build_net(vs, es, dg);
    FAIL("expected DuplicatePortOccupancy");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicatePortOccupancy);
  }
}

TEST_CASE("edges referencing undeclared ports are rejected") {
  std::map<std::string, Label> vs{{"v1", th::sym_b()}};
  std::map<PortRef, PortRef> es{{{"v1", out_port(7)}, {"v1", in_port(1)}}};
  try {
    build_net(vs, es, {{{"v1", out_port(1)}, "p"}});
    FAIL("expected UnknownPort");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownPort);
  }
}

TEST_CASE("frontier letters must have exactly one port") {
  Label bad;
  bad.kind = Label::Kind::Frontier;
  bad.name = "x";
  bad.in_arities = {1};
  bad.out_arities = {1};
  std::map<std::string, Label> vs{{"v1", bad}};
  try {
    build_net(vs, {}, {{{"v1", in_port(1)}, "p"}, {{"v1", out_port(1)}, "q"}});
    FAIL("expected FrontierArityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::FrontierArityViolation);
  }
}

TEST_CASE("canonical form is deterministic and id-independent") {
  Net n = th::chain2(th::sym_a(), th::sym_b());
  CHECK(canonical_form(n) == canonical_form(n));
  Net renamed = NetBuilder()
                    .vertex("zz", th::sym_a())
                    .vertex("aa", th::sym_b())
                    .edge("zz", 1, "aa", 1)
                    .build();
  CHECK(canonical_form(n) == canonical_form(renamed));
}

TEST_CASE("canonical form ignores arity letter names but not positions") {
  Net n1 = NetBuilder().vertex("v1", th::sym_b()).letter("v1", in_port(1), "p").build();
  Net n2 = NetBuilder().vertex("v1", th::sym_b()).letter("v1", in_port(1), "q").build();
  CHECK(canonical_form(n1) == canonical_form(n2));
}

TEST_CASE("canonical form agrees with the all-permutations oracle") {
  // Equal/unequal verdicts must coincide with brute-force minimum encodings
  // on an assorted family of small nets.
  std::vector<Net> nets = {
      th::single(th::sym_a()),
      th::single(th::sym_b()),
      th::single(th::sym_u()),
      th::loop1(th::sym_b()),
      th::chain2(th::sym_a(), th::sym_b()),
      th::chain2(th::sym_b(), th::sym_a()),
      th::chain2(th::sym_b(), th::sym_b()),
      th::chain3(th::sym_b(), th::sym_b(), th::sym_b()),
      NetBuilder()
          .vertex("v1", th::sym_b())
          .vertex("v2", th::sym_b())
          .edge("v1", 1, "v2", 1)
          .edge("v2", 1, "v1", 1)
          .build(),
      NetBuilder()
          .vertex("v1", th::sym_a())
          .vertex("v2", th::sym_b())
          .vertex("v3", th::sym_b())
          .edge("v2", 1, "v1", 1)
          .edge("v3", 1, "v1", 2)
          .build(),
  };
  for (std::size_t i = 0; i < nets.size(); ++i)
    for (std::size_t j = 0; j < nets.size(); ++j) {
      bool engine = canonical_form(nets[i]) == canonical_form(nets[j]);
      bool oracle = th::brute_canonical_form(nets[i]) == th::brute_canonical_form(nets[j]);
      INFO("pair " << i << "," << j);
      CHECK(engine == oracle);
    }
}

TEST_CASE("canonical member round-trips the form") {
  Net n = th::chain3(th::sym_b(), th::sym_a(), th::sym_b());
  Net m = canonical_member(n);
  CHECK(canonical_form(m) == canonical_form(n));
  CHECK(m.vertices.count("n0") == 1);
}

TEST_CASE("isomorphism allows symbol renaming but not rank changes") {
  CHECK(is_isomorphic(th::single(th::sym_b()), th::single(th::sym_u())));
  CHECK_FALSE(is_isomorphic(th::single(th::sym_a()), th::single(th::sym_b())));
  Net n = th::chain2(th::sym_b(), th::sym_u());
  CHECK(is_isomorphic(n, n));
}

TEST_CASE("isomorphism agrees with the brute-force bijection oracle") {
  std::vector<Net> nets = {
      th::single(th::sym_b()),
      th::single(th::sym_u()),
      th::loop1(th::sym_b()),
      th::loop1(th::sym_u()),
      th::chain2(th::sym_b(), th::sym_b()),
      th::chain2(th::sym_b(), th::sym_u()),
      th::chain2(th::sym_u(), th::sym_b()),
      th::chain3(th::sym_b(), th::sym_u(), th::sym_b()),
      th::chain3(th::sym_b(), th::sym_b(), th::sym_u()),
  };
  for (std::size_t i = 0; i < nets.size(); ++i)
    for (std::size_t j = 0; j < nets.size(); ++j) {
      INFO("pair " << i << "," << j);
      CHECK(is_isomorphic(nets[i], nets[j]) == th::brute_isomorphic(nets[i], nets[j]));
    }
}

TEST_CASE("iso_form equality characterizes isomorphism on the sample") {
  Net x = th::chain2(th::sym_b(), th::sym_u());
  Net y = th::chain2(th::sym_u(), th::sym_b());
  CHECK(iso_form(x) == iso_form(y));
  CHECK(is_isomorphic(x, y));
  CHECK(canonical_form(x) != canonical_form(y));  // strict classes differ
}

TEST_CASE("jungle deduplicates by canonical form and iterates in key order") {
  Jungle j;
  CHECK(j.insert(th::single(th::sym_b())));
  CHECK_FALSE(j.insert(th::single(th::sym_b(), "other_id")));
  CHECK(j.insert(th::single(th::sym_u())));
  CHECK(j.size() == 2);
  auto keys = j.keys();
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("positions_of finds the whole net and repeated single vertices") {
  Net host = th::chain3(th::sym_b(), th::sym_b(), th::sym_u());
  CHECK(positions_of(host, host).size() == 1);
  CHECK(positions_of(host, host)[0].whole_net());
  auto at_b = positions_of(host, th::single(th::sym_b()));
  CHECK(at_b.size() == 2);
  CHECK(positions_of(host, th::single(th::sym_a())).empty());
}

TEST_CASE("positions_of requires induced equality") {
  // The 2-cycle contains no occurrence of the open chain: both candidate
  // subsets carry the extra back edge.
  Net cyc = NetBuilder()
                .vertex("v1", th::sym_b())
                .vertex("v2", th::sym_b())
                .edge("v1", 1, "v2", 1)
                .edge("v2", 1, "v1", 1)
                .build();
  CHECK(positions_of(cyc, th::chain2(th::sym_b(), th::sym_b())).empty());
}

TEST_CASE("enclosures of a two-vertex chain") {
  Net host = th::chain2(th::sym_b(), th::sym_u());
  Jungle enc = enclosures(host);
  CHECK(enc.size() == 3);
  CHECK(enc.contains(host));
  CHECK(enc.contains(th::single(th::sym_b())));
  CHECK(enc.contains(th::single(th::sym_u())));
}

TEST_CASE("enclosures of a self-loop vertex has exactly one member") {
  Jungle enc = enclosures(th::loop1(th::sym_b()));
  CHECK(enc.size() == 1);
  CHECK(enc.contains(th::loop1(th::sym_b())));
}

TEST_CASE("enclosures contains the net itself and every single vertex") {
  Net host = th::chain3(th::sym_b(), th::sym_a(), th::sym_u());
  Jungle enc = enclosures(host);
  CHECK(enc.contains(host));
  for (const std::string& v : host.vertex_ids())
    CHECK(enc.contains(induced_subnet(host, {v})));
}

TEST_CASE("link_stats counts boundary crossings and dangling ports") {
  Net host = th::chain3(th::sym_b(), th::sym_a(), th::sym_b());
  // Occurrence = the middle a-vertex: one inward edge, one outward edge,
  // one host-dangling port (a.in2).
  Position at = Position::of_vertices(host, {"v2"});
  LinkStats st = link_stats(th::single(th::sym_a()), host, at);
  CHECK(st.ilc == 1);
  CHECK(st.olc == 1);
  CHECK(st.unoccupied == 1);
  CHECK(st.orn == 2);
}

TEST_CASE("link_stats of the whole net has no crossings") {
  Net host = th::chain2(th::sym_b(), th::sym_b());
  LinkStats st = link_stats(host, host, Position{});
  CHECK(st.ilc == 0);
  CHECK(st.olc == 0);
  CHECK(st.orn == st.unoccupied);
  CHECK(st.unoccupied == 2);
}

TEST_CASE("link_stats of an isolated occurrence: orn equals dangling count") {
  Net host = th::single(th::sym_a());
  LinkStats st = link_stats(host, host, Position{});
  CHECK(st.orn == 3);
}

TEST_CASE("link_stats rejects a position that is not an occurrence") {
  Net host = th::chain2(th::sym_b(), th::sym_b());
  Position at = Position::of_vertices(host, {"v1"});
  try {
    link_stats(th::single(th::sym_a()), host, at);
    FAIL("expected InvalidPosition");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidPosition);
  }
}

TEST_CASE("net_union of one net with empty gluing is the net itself") {
  Net n = th::chain2(th::sym_b(), th::sym_b());
  CHECK(canonical_form(net_union({n})) == canonical_form(n));
}

TEST_CASE("net_union glues dangling ports into a chain") {
  Net a = th::single(th::sym_b(), "va");
  Net b = th::single(th::sym_b(), "vb");
  Net u = net_union({a, b}, {Gluing{{"va", out_port(1)}, {"vb", in_port(1)}}});
  CHECK(canonical_form(u) == canonical_form(th::chain2(th::sym_b(), th::sym_b())));
}

TEST_CASE("net_union rejects conflicting double gluing of one port") {
  Net a = th::single(th::sym_b(), "va");
  Net b = th::single(th::sym_b(), "vb");
  Net c = th::single(th::sym_b(), "vc");
  try {
    net_union({a, b, c}, {Gluing{{"va", out_port(1)}, {"vb", in_port(1)}},
                          Gluing{{"va", out_port(1)}, {"vc", in_port(1)}}});
    FAIL("expected GluingConflict");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GluingConflict);
  }
}

TEST_CASE("apex strips frontier attachments") {
  Net n = NetBuilder()
              .vertex("v1", th::sym_b())
              .vertex("f1", frontier("x", Dir::Out))
              .edge("f1", 1, "v1", 1)
              .build();
  Net ap = apex(n);
  CHECK(ap.size() == 1);
  CHECK(canonical_form(ap) == canonical_form(th::single(th::sym_b())));
}

TEST_CASE("root is carried but does not affect canonical form") {
  Net plain = th::single(th::sym_b());
  Net rooted = NetBuilder().vertex("v1", th::sym_b()).root("v1").build();
  CHECK(canonical_form(plain) == canonical_form(rooted));
  CHECK(canonical_member(rooted).root.has_value());
}
