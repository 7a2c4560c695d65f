#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "epscov/covers.hpp"

using namespace epscov;

TEST_CASE("circle cover at a small scale is a line") {
  auto g = make_circle(1.0);
  HomotopyEngine eng(g, 0.02);
  CoverBall ball(eng, 0.3, 2.4);
  CHECK(ball.group().group().rank() == 1);
  CHECK(ball.size() == 241);
  double far = 0.0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    CHECK(ball.node(i).norm <= 2.4 + 1e-9);
    CHECK(ball.distance(0, i) == doctest::Approx(ball.node(i).norm));
    for (std::size_t j = 0; j < ball.size(); ++j) far = std::max(far, ball.distance(i, j));
  }
  CHECK(far == doctest::Approx(4.8));
  // On a line the basepoint separates: through it distances add up.
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (std::size_t j = 0; j < ball.size(); ++j)
      CHECK(ball.distance(i, j) <= ball.node(i).norm + ball.node(j).norm + 1e-9);
  std::ostringstream out;
  write_ball_graph(out, ball);
  std::istringstream in(out.str());
  auto back = parse_graph(in);
  CHECK(back.num_vertices() == ball.size());
  CHECK(back.diameter() == doctest::Approx(4.8));
}

TEST_CASE("circle cover above the critical value is the circle") {
  auto g = make_circle(1.0);
  HomotopyEngine eng(g, 0.02);
  CoverBall ball(eng, 0.4, 2.0);
  CHECK(ball.group().group().kind() == GroupKind::Trivial);
  CHECK(ball.size() == eng.net().size());
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (std::size_t j = 0; j < ball.size(); ++j)
      CHECK(ball.distance(i, j) == doctest::Approx(g.distance(ball.projection(i), ball.projection(j))));
}

TEST_CASE("deck transformations") {
  auto g = make_circle(1.0);
  HomotopyEngine eng(g, 0.02);
  CoverBall ball(eng, 0.3, 2.4);
  Chain around{{}, 0.3};
  for (int k = 0; k <= 10; ++k) around.points.push_back(g.point(0, 0.1 * (k % 10)));
  around.points.back() = g.point(0, 0.0);
  auto img = deck_action(ball, around);
  int moved = 0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (img[i] < 0) continue;
    ++moved;
    CHECK(ball.node(img[i]).point == ball.node(i).point);
    CHECK(ball.distance(i, img[i]) == doctest::Approx(1.0));
  }
  CHECK(moved > 100);
  Chain still{{g.point(0, 0.0), g.point(0, 0.1), g.point(0, 0.0)}, 0.3};
  auto id = deck_action(ball, still);
  for (std::size_t i = 0; i < ball.size(); ++i) CHECK(id[i] == static_cast<int>(i));
  CHECK_THROWS_AS(deck_action(ball, Chain{{g.point(0, 0.1), g.point(0, 0.1)}, 0.3}), DomainError);
}

TEST_CASE("torus cover with one kernel triad is a cylinder") {
  auto tor = make_torus_grid(1.0 / 3, 1.0 / 3, 12);
  HomotopyEngine eng(tor, 1.0 / 12);
  auto ht = make_triad(eng.net(), 0, 4 * 12, 8 * 12, 0.0);
  KernelSpec spec{{ht}, {}};
  CoverBall ball(eng, 0.32, 1.0, spec);
  auto inv = quotient_group_invariants(ball);
  CHECK(inv.rank == 1);
  CHECK(inv.torsion.empty());
  CoverBall full(eng, 0.32, 1.0);
  CHECK(quotient_group_invariants(full).rank == 2);
  // Kernel loops lift to closed loops.
  for (const auto& l : ball.group().kernel_loops()) {
    auto img = deck_action(ball, l);
    for (std::size_t i = 0; i < ball.size(); ++i) CHECK(img[i] == static_cast<int>(i));
  }
  CHECK(ball.size() < full.size());
}

TEST_CASE("covering map is a local isometry") {
  auto tor = make_torus_grid(1.0 / 3, 1.0 / 3, 12);
  HomotopyEngine eng(tor, 1.0 / 12);
  CoverBall ball(eng, 0.32, 0.9);
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  int tested = 0;
  for (int k = 0; k < 4000 && tested < 200; ++k) {
    std::size_t i = pick(rng), j = pick(rng);
    if (ball.distance(i, j) >= 0.16 - 1e-9) continue;
    if (ball.node(i).norm + ball.distance(i, j) > 0.9) continue;
    ++tested;
    CHECK(ball.distance(i, j) == doctest::Approx(tor.distance(ball.projection(i), ball.projection(j))));
  }
  CHECK(tested > 50);
}

TEST_CASE("classes dying at a coarser scale match the kernel triads") {
  auto g = make_circle(1.0);
  HomotopyEngine eng(g, 0.02);
  auto t = make_triad(eng.net(), 0, 17, 33, 0.0);
  auto dying = theta_kernel_lattice(eng, 0.3, 0.4);
  auto killed = kernel_class_lattice(eng, 0.3, KernelSpec{{t}, {}});
  CHECK(dying == killed);
  CHECK(dying == IntMatrix{{1}});
  CHECK(theta_kernel_lattice(eng, 0.3, 0.31).empty());

  auto tor = make_torus_grid(1.0 / 3, 2.0 / 3, 12);
  HomotopyEngine te(tor, 1.0 / 12);
  // Only the short direction dies between 0.3 and 0.4.
  auto d2 = theta_kernel_lattice(te, 0.3, 0.4);
  auto ht = make_triad(te.net(), 0, 4 * 12, 8 * 12, 0.0);
  CHECK(d2.size() == 1);
  CHECK(d2 == kernel_class_lattice(te, 0.3, KernelSpec{{ht}, {}}));
}

TEST_CASE("lollichain generators") {
  auto w = make_wedge({1.0, 2.0});
  HomotopyEngine we(w, 1.0 / 48);
  auto rep = lollichain_generators(we, 0.25, 0.03, {}, 1);
  CHECK(rep.chains.size() == 2);
  CHECK(rep.generates_h1);
  CHECK(rep.full_generation_certified);
  for (const auto& c : rep.chains) {
    CHECK(c.is_loop());
    CHECK(is_valid(w, c));
    CHECK(c.points.front() == we.net().point(we.basepoint()));
  }

  auto c = make_circle(1.0);
  HomotopyEngine ce(c, 0.02);
  auto rc = lollichain_generators(ce, 0.3, 0.04, {}, 1);
  CHECK(rc.chains.size() == 1);
  CHECK(rc.full_generation_certified);

  auto tree = make_segment(2.0);
  HomotopyEngine tr(tree, 0.05);
  auto rt = lollichain_generators(tr, 0.3, 0.05, {}, 1);
  CHECK(rt.chains.empty());
  CHECK(rt.group_kind == GroupKind::Trivial);
  CHECK(rt.full_generation_certified);
}
