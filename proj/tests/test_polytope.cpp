#include <random>
#include <sstream>

#include "doctest.h"
#include "elicit/errors.hpp"
#include "elicit/instance_io.hpp"
#include "elicit/polytope.hpp"
#include "support/oracles.hpp"

using namespace elicit;

namespace {

const Halfspace kToyCut{{1, -1, -13}, 6};

Halfspace toy_constraint(Element preferred, Element other) {
  return preference_halfspace(toy_scheduling_instance().attributes, preferred, other).halfspace;
}

bool has_point(const UncertaintyPolytope& p, const std::vector<double>& x, double tol = 1e-9) {
  for (const auto& v : p.vertices()) {
    double d = 0;
    for (std::size_t j = 0; j < x.size(); ++j) d = std::max(d, std::abs(v.point.coords[j] - x[j]));
    if (d <= tol) return true;
  }
  return false;
}

std::size_t find_point(const UncertaintyPolytope& p, const std::vector<double>& x, double tol = 1e-7) {
  for (std::size_t i = 0; i < p.vertices().size(); ++i) {
    double d = 0;
    for (std::size_t j = 0; j < x.size(); ++j) d = std::max(d, std::abs(p.vertices()[i].point.coords[j] - x[j]));
    if (d <= tol) return i;
  }
  return p.vertices().size();
}

void check_invariants(const UncertaintyPolytope& p) {
  const auto& hs = p.halfspaces();
  const std::size_t dim = p.dimension();
  for (std::size_t i = 0; i < p.vertices().size(); ++i) {
    const auto& v = p.vertices()[i];
    for (std::size_t h = 0; h < hs.size(); ++h) {
      const double g = hs[h].evaluate(v.point.coords);
      REQUIRE(g >= -1e-9);
      REQUIRE(v.tight.test(h) == (std::abs(g) <= 1e-9));
    }
    REQUIRE(normal_rank(hs, v.tight, dim) == dim);
    REQUIRE_FALSE(p.adjacent(i, i));
    for (auto j : p.adjacency()[i]) {
      REQUIRE(p.adjacent(j, i));
      REQUIRE(normal_rank(hs, v.tight & p.vertices()[j].tight, dim) == dim - 1);
    }
  }
}

void require_matches_brute_force(const UncertaintyPolytope& p) {
  std::string diff;
  const auto forward = brute_force_vertex_enum(p.halfspaces(), p.dimension());
  INFO(p.dump());
  INFO(diff);
  REQUIRE_MESSAGE(same_geometry(p, forward, 1e-7, &diff), diff);
  const auto backward = brute_force_vertex_enum(p.halfspaces(), p.dimension(), true);
  REQUIRE(backward.vertices.size() == forward.vertices.size());
}

}  // namespace

TEST_CASE("initial simplex") {
  const auto p4 = UncertaintyPolytope::initial_simplex(4);
  CHECK(p4.dimension() == 3);
  CHECK(p4.vertices().size() == 4);
  CHECK(p4.edge_count() == 6);
  CHECK(has_point(p4, {0, 0, 0}));
  CHECK(has_point(p4, {1, 0, 0}));
  CHECK(has_point(p4, {0, 1, 0}));
  CHECK(has_point(p4, {0, 0, 1}));
  CHECK(p4.halfspaces().size() == 4);
  check_invariants(p4);

  const auto p2 = UncertaintyPolytope::initial_simplex(2);
  CHECK(p2.vertices().size() == 2);
  CHECK(p2.edge_count() == 1);
  check_invariants(p2);

  const auto p5 = UncertaintyPolytope::initial_simplex(5);
  CHECK(p5.vertices().size() == 5);
  CHECK(p5.edge_count() == 10);

  CHECK_THROWS_AS(UncertaintyPolytope::initial_simplex(1), InputError);
}

TEST_CASE("classify the toy simplex against the first constraint") {
  const auto c0 = UncertaintyPolytope::initial_simplex(4);
  const auto c = classify_vertices(c0, kToyCut);
  // vertex order: origin, e1, e2, e3
  CHECK(c.feasible == std::vector<std::size_t>{0, 1, 2});
  CHECK(c.infeasible == std::vector<std::size_t>{3});
  CHECK(c.on_boundary.empty());
  CHECK(toy_constraint(3, 4).normal == kToyCut.normal);

  const auto zero = classify_vertices(c0, Halfspace{{0, 0, 0}, 0});
  CHECK(zero.on_boundary.size() == 4);
  CHECK_THROWS_AS(classify_vertices(c0, Halfspace{{1, 0}, 0}), InputError);
}

TEST_CASE("edge intersections of the first toy cut") {
  const SigmaPoint origin{{0, 0, 0}}, e1{{1, 0, 0}}, e2{{0, 1, 0}}, e3{{0, 0, 1}};
  const auto a = edge_intersection(origin, e3, kToyCut).coords;
  CHECK(a[2] == doctest::Approx(6.0 / 13));
  CHECK(a[2] == doctest::Approx(0.4615).epsilon(1e-4));
  const auto b = edge_intersection(e1, e3, kToyCut).coords;
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[2] == doctest::Approx(0.5));
  const auto c = edge_intersection(e2, e3, kToyCut).coords;
  CHECK(c[1] == doctest::Approx(7.0 / 12));
  CHECK(c[2] == doctest::Approx(5.0 / 12));
  CHECK(std::abs(kToyCut.evaluate(c)) <= 1e-9);
  CHECK_THROWS_AS(edge_intersection(e3, origin, kToyCut), PreconditionError);
  CHECK_THROWS_AS(edge_intersection(origin, e1, kToyCut), PreconditionError);
}

TEST_CASE("toy cuts give 6 then 7 vertices") {
  const auto c0 = UncertaintyPolytope::initial_simplex(4);
  const auto r1 = cut(c0, kToyCut);
  CHECK(r1.outcome == CutOutcome::Refined);
  const auto& c1 = r1.polytope;
  CHECK(c1.vertices().size() == 6);
  CHECK(has_point(c1, {0, 0, 0}));
  CHECK(has_point(c1, {1, 0, 0}));
  CHECK(has_point(c1, {0, 1, 0}));
  CHECK(has_point(c1, {0.5, 0, 0.5}));
  CHECK(has_point(c1, {0, 7.0 / 12, 5.0 / 12}));
  CHECK(has_point(c1, {0, 0, 6.0 / 13}));
  CHECK(c1.edge_count() == 9);
  check_invariants(c1);
  require_matches_brute_force(c1);

  const auto c2 = cut(c1, toy_constraint(5, 4)).polytope;
  CHECK(c2.vertices().size() == 7);
  check_invariants(c2);
  require_matches_brute_force(c2);
}

TEST_CASE("brute force on the simplex and on the first toy region") {
  const auto c0 = UncertaintyPolytope::initial_simplex(4);
  const auto e0 = brute_force_vertex_enum(c0.halfspaces(), 3);
  CHECK(e0.vertices.size() == 4);
  for (const auto& list : e0.adjacency) CHECK(list.size() == 3);
  auto hs = c0.halfspaces();
  hs.push_back(kToyCut);
  CHECK(brute_force_vertex_enum(hs, 3).vertices.size() == 6);
  CHECK(brute_force_vertex_enum(hs, 3, true).vertices.size() == 6);
}

TEST_CASE("brute force scale limits") {
  CHECK_THROWS_AS(brute_force_vertex_enum(UncertaintyPolytope::initial_simplex(8).halfspaces(), 7), SizeError);
  std::vector<Halfspace> many(31, Halfspace{{1, 0}, 0});
  CHECK_THROWS_AS(brute_force_vertex_enum(many, 2), SizeError);
}

TEST_CASE("uninformative, contradictory and flattening cuts") {
  const auto c0 = UncertaintyPolytope::initial_simplex(3);
  const auto same = cut(c0, Halfspace{{1, 1}, 1});
  CHECK(same.outcome == CutOutcome::Uninformative);
  CHECK(same.polytope.vertices().size() == 3);
  CHECK(same.polytope.halfspaces().size() == 4);

  // all three vertices have sigma1 <= 1 < 2
  CHECK_THROWS_AS(cut(c0, Halfspace{{1, 0}, -2}), ContradictionError);
  // only e1 touches sigma1 >= 1
  CHECK_THROWS_AS(cut(c0, Halfspace{{1, 0}, -1}), PreconditionError);
}

TEST_CASE("cut through an existing vertex") {
  const auto c0 = UncertaintyPolytope::initial_simplex(3);
  // sigma1 - sigma2 >= 0 passes through the origin.
  const auto r = cut(c0, Halfspace{{1, -1}, 0});
  CHECK(r.outcome == CutOutcome::Refined);
  const auto& p = r.polytope;
  CHECK(p.vertices().size() == 3);
  CHECK(has_point(p, {0.5, 0.5}));
  CHECK(p.edge_count() == 3);
  check_invariants(p);
  require_matches_brute_force(p);

  // A tetrahedron cut through an edge.
  const auto t = cut(UncertaintyPolytope::initial_simplex(4), Halfspace{{1, -1, 0}, 0}).polytope;
  check_invariants(t);
  require_matches_brute_force(t);
  CHECK(t.vertices().size() == 4);
}

TEST_CASE("cuts meeting at a shared point are merged") {
  // A square-based region: cut the triangle so that new points coincide.
  auto p = UncertaintyPolytope::initial_simplex(4);
  p = cut(p, Halfspace{{-1, -1, 0}, 0.5}).polytope;
  p = cut(p, Halfspace{{0, -1, -1}, 0.5}).polytope;
  p = cut(p, Halfspace{{-1, 0, -1}, 0.5}).polytope;
  check_invariants(p);
  require_matches_brute_force(p);
}

TEST_CASE("dump format") {
  const auto text = UncertaintyPolytope::initial_simplex(2).dump();
  CHECK(text == "v 0 : 0 | 0\nv 1 : 1 | 1\ne 0 1\n");
}

TEST_CASE("property: incremental region equals brute force on random cut sequences") {
  std::mt19937_64 rng(31);
  for (int seq = 0; seq < 60; ++seq) {
    const std::size_t p = 3 + seq % 4;  // dim 2..5
    auto region = UncertaintyPolytope::initial_simplex(p);
    const int cuts = 1 + static_cast<int>(rng() % 20);
    for (int c = 0; c < cuts && region.halfspaces().size() < kBruteForceMaxHalfspaces; ++c) {
      const auto h = oracle::random_cut(rng, region);
      const auto before = region;
      region = cut(region, h).polytope;
      check_invariants(region);
      require_matches_brute_force(region);
      // monotone: the new vertices satisfy every old constraint
      for (const auto& v : region.vertices()) REQUIRE(before.contains(v.point.coords, 1e-9));
      for (const auto& v : region.vertices()) {
        if (!has_point(before, v.point.coords)) REQUIRE(std::abs(h.evaluate(v.point.coords)) <= 1e-9);
      }
      // random cuts are generic, so the polytope stays simple
      for (const auto& list : region.adjacency()) REQUIRE(list.size() >= region.dimension());
    }
  }
}

TEST_CASE("property: degenerate cuts from integer elicitation constraints match brute force") {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> d(0, 4);
  for (int seq = 0; seq < 80; ++seq) {
    const std::size_t p = 3 + seq % 3;
    const std::size_t n = 6;
    std::vector<double> values(n * p);
    for (auto& x : values) x = d(rng);
    const AttributeMatrix y(n, p, values);
    auto region = UncertaintyPolytope::initial_simplex(p);
    for (int c = 0; c < 12; ++c) {
      const Element a = rng() % n;
      const Element b = (a + 1 + rng() % (n - 1)) % n;
      const auto h = preference_halfspace(y, a, b).halfspace;
      const auto sides = classify_vertices(region, h);
      if (sides.feasible.empty()) continue;
      region = cut(region, h).polytope;
      check_invariants(region);
      require_matches_brute_force(region);
    }
  }
}

TEST_CASE("property: two-dimensional regions agree with polygon clipping") {
  std::mt19937_64 rng(33);
  for (int seq = 0; seq < 100; ++seq) {
    auto region = UncertaintyPolytope::initial_simplex(3);
    std::vector<Halfspace> cuts;
    for (int c = 0; c < 8; ++c) {
      cuts.push_back(oracle::random_cut(rng, region));
      region = cut(region, cuts.back()).polytope;
      const auto polygon = oracle::clip_polygon(cuts);
      REQUIRE(polygon.size() == region.vertices().size());
      for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto a = find_point(region, polygon[i]);
        const auto b = find_point(region, polygon[(i + 1) % polygon.size()]);
        REQUIRE(a < region.vertices().size());
        REQUIRE(b < region.vertices().size());
        REQUIRE(region.adjacent(a, b));
      }
      REQUIRE(region.edge_count() == polygon.size());
    }
  }
}

TEST_CASE("property: new vertices of a 2-face cut are adjacent") {
  std::mt19937_64 rng(34);
  std::size_t witnessed = 0;
  for (int seq = 0; seq < 200; ++seq) {
    const std::size_t p = 4 + seq % 2;
    auto region = UncertaintyPolytope::initial_simplex(p);
    for (int c = 0; c < 6; ++c) {
      const auto h = oracle::random_cut(rng, region);
      const auto sides = classify_vertices(region, h);
      const auto next = cut(region, h).polytope;
      const auto& hs = region.halfspaces();
      const std::size_t dim = region.dimension();
      for (auto w : sides.feasible) {
        for (auto u : sides.infeasible) {
          for (auto v : sides.infeasible) {
            if (v <= u || !region.adjacent(u, v) || !region.adjacent(w, u) || !region.adjacent(w, v)) continue;
            const auto common = region.vertices()[w].tight & region.vertices()[u].tight & region.vertices()[v].tight;
            if (normal_rank(hs, common, dim) + 2 != dim) continue;
            const auto& V = region.vertices();
            const auto wu = find_point(next, edge_intersection(V[w].point, V[u].point, h).coords);
            const auto wv = find_point(next, edge_intersection(V[w].point, V[v].point, h).coords);
            REQUIRE(wu < next.vertices().size());
            REQUIRE(wv < next.vertices().size());
            REQUIRE(next.adjacent(wu, wv));
            ++witnessed;
          }
        }
      }
      region = next;
    }
  }
  CHECK(witnessed > 50);
}
