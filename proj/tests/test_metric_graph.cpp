#include <doctest.h>

#include <random>
#include <sstream>

#include "epscov/metric_graph.hpp"
#include "oracles.hpp"

using namespace epscov;

TEST_CASE("circle distances") {
  auto g = make_circle(1.0);
  CHECK(g.num_vertices() == 1);
  CHECK(g.num_edges() == 1);
  CHECK(g.distance(g.point(0, 0.0), g.point(0, 0.4)) == doctest::Approx(0.4));
  CHECK(g.distance(g.point(0, 0.1), g.point(0, 0.9)) == doctest::Approx(0.2));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double s = u(rng), t = u(rng);
    CHECK(g.distance(g.point(0, s), g.point(0, t)) == doctest::Approx(oracle::circle_distance(1.0, s, t)).epsilon(1e-12));
  }
}

TEST_CASE("wedge distance against subdivision oracle") {
  auto g = make_wedge({1.0, 2.0});
  auto p = g.point(0, 0.3), q = g.point(1, 0.3);
  CHECK(g.distance(p, q) == doctest::Approx(0.6));
  CHECK(oracle::subdivided_distance(g, p, q) == doctest::Approx(0.6));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto t = make_torus_grid(1.0 / 3, 2.0 / 3, 5);
  for (int i = 0; i < 100; ++i) {
    int e1 = static_cast<int>(u(rng) * t.num_edges()), e2 = static_cast<int>(u(rng) * t.num_edges());
    auto a = t.point(e1, u(rng) * t.edge(e1).length);
    auto b = t.point(e2, u(rng) * t.edge(e2).length);
    CHECK(t.distance(a, b) == doctest::Approx(oracle::subdivided_distance(t, a, b)).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms on a random net") {
  auto g = make_wedge({1.0, 0.5, 0.7});
  Net net(g, 0.07);
  for (std::size_t i = 0; i < net.size(); ++i) {
    CHECK(net.distance(i, i) == 0.0);
    for (std::size_t j = 0; j < net.size(); ++j) {
      CHECK(net.distance(i, j) == net.distance(j, i));
      if (i != j) CHECK(net.distance(i, j) > 0.0);
      for (std::size_t k = 0; k < net.size(); k += 5)
        CHECK(net.distance(i, j) <= net.distance(i, k) + net.distance(k, j) + kTol);
    }
  }
}

TEST_CASE("midpoints") {
  auto g = make_circle(1.0);
  auto m = g.midpoint(g.point(0, 0.0), g.point(0, 0.4));
  CHECK(m.edge == 0);
  CHECK(m.offset == doctest::Approx(0.2));
  auto anti = g.midpoint(g.point(0, 0.0), g.point(0, 0.5));
  CHECK(anti.offset == doctest::Approx(0.25));
  // The other geodesic is also valid: 0.75 satisfies the same identities.
  CHECK(g.distance(g.point(0, 0.0), g.point(0, 0.75)) == doctest::Approx(0.25));
  CHECK(g.distance(g.point(0, 0.75), g.point(0, 0.5)) == doctest::Approx(0.25));
  auto s = make_segment(2.0);
  auto sm = s.midpoint(GraphPoint::at_vertex(0), GraphPoint::at_vertex(1));
  CHECK(sm.offset == doctest::Approx(1.0));
  auto p = g.point(0, 0.3);
  CHECK(g.midpoint(p, p) == p);

  auto t = make_torus_grid(1.0 / 3, 0.5, 6);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    int e1 = static_cast<int>(u(rng) * t.num_edges()), e2 = static_cast<int>(u(rng) * t.num_edges());
    auto a = t.point(e1, u(rng) * t.edge(e1).length);
    auto b = t.point(e2, u(rng) * t.edge(e2).length);
    auto mid = t.midpoint(a, b);
    double d = t.distance(a, b);
    CHECK(std::fabs(t.distance(a, mid) - d / 2) < kTol);
    CHECK(std::fabs(t.distance(mid, b) - d / 2) < kTol);
    CHECK(t.midpoint(a, b) == mid);
  }
}

TEST_CASE("generators") {
  auto t = make_torus_grid(1.0 / 3, 1.0 / 3, 6);
  CHECK(t.num_vertices() == 36);
  CHECK(t.num_edges() == 72);
  for (int e = 0; e < t.num_edges(); ++e) CHECK(t.edge(e).length == doctest::Approx(1.0 / 6));
  auto w = make_wedge({1, 2});
  CHECK(w.num_vertices() == 1);
  CHECK(w.num_edges() == 2);
  auto h = make_hawaiian_stage(3);
  CHECK(h.edge(2).length == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_circle(0.0), DomainError);
  CHECK_THROWS_AS(make_torus_grid(1, 1, 2), DomainError);
  CHECK(make_named("torus:0.25,0.5,4").num_vertices() == 16);
}

TEST_CASE("nets") {
  auto c = make_circle(1.0);
  CHECK(Net(c, 0.1).size() == 10);
  Net coarse(c, 0.3);
  CHECK(coarse.size() == 4);
  CHECK(coarse.distance(0, 1) == doctest::Approx(0.25));
  auto s = make_segment(1.0);
  Net sn(s, 0.5);
  CHECK(sn.size() == 3);
  CHECK(sn.point(2).offset == doctest::Approx(0.5));

  auto w = make_wedge({1.0, 0.35});
  Net wn(w, 0.08);
  double worst = 0;
  for (int e = 0; e < w.num_edges(); ++e)
    for (int k = 0; k <= 400; ++k) {
      auto p = w.point(e, w.edge(e).length * k / 400);
      worst = std::max(worst, w.distance(p, wn.point(wn.nearest(p))));
    }
  CHECK(worst <= 0.08);
}

TEST_CASE("text format") {
  std::istringstream ok("# square\nv 3\nv 1\ne 10 1 3 0.5\ne 11 3 1 0.25\n");
  auto g = parse_graph(ok);
  CHECK(g.num_vertices() == 2);
  CHECK(g.vertex_label(0) == 1);
  CHECK(g.distance(GraphPoint::at_vertex(0), GraphPoint::at_vertex(1)) == doctest::Approx(0.25));
  std::ostringstream out;
  write_graph(out, g);
  std::istringstream back(out.str());
  CHECK(parse_graph(back).num_edges() == 2);

  std::istringstream neg("v 0\nv 1\ne 0 0 1 -1\n");
  try {
    parse_graph(neg);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream split("v 0\nv 1\nv 2\ne 0 0 1 1\n");
  try {
    parse_graph(split);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}
