#include <doctest.h>

#include <cmath>
#include <random>

#include "epscov/gh.hpp"
#include "oracles.hpp"

using namespace epscov;

namespace {

FiniteMetricSpace random_space(std::mt19937& rng, std::size_t n) {
  // Shortest paths of a random weighted complete graph give a metric.
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = w(rng);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return FiniteMetricSpace::from_matrix(d);
}

// Brute force over all relations, for spaces of at most 3 points.
double brute_gh(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  const std::size_t np = X.size * Y.size;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << np); ++mask) {
    Correspondence c;
    for (std::size_t p = 0; p < np; ++p)
      if (mask >> p & 1) c.push_back({static_cast<int>(p / Y.size), static_cast<int>(p % Y.size)});
    if (is_correspondence(X, Y, c)) best = std::min(best, distortion(X, Y, c) / 2);
  }
  return best;
}

}  // namespace

TEST_CASE("exact Gromov-Hausdorff distance") {
  auto two = [](double g) { return FiniteMetricSpace::from_matrix({{0, g}, {g, 0}}); };
  CHECK(gh_distance_exact(two(1.0), two(1.0)) == 0.0);
  CHECK(gh_distance_exact(two(1.0), two(1.2)) == doctest::Approx(0.1));
  auto one = FiniteMetricSpace::from_matrix({{0}});
  CHECK(gh_distance_exact(one, two(3.0)) == doctest::Approx(1.5));

  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    auto X = random_space(rng, 1 + t % 3), Y = random_space(rng, 1 + (t / 3) % 3);
    double e = gh_distance_exact(X, Y);
    CHECK(e == doctest::Approx(brute_gh(X, Y)));
    CHECK(e == doctest::Approx(gh_distance_exact(Y, X)));
  }
  for (int t = 0; t < 30; ++t) {
    auto X = random_space(rng, 2 + t % 3), Y = random_space(rng, 3), Z = random_space(rng, 2 + t % 2);
    CHECK(gh_distance_exact(X, Z) <= gh_distance_exact(X, Y) + gh_distance_exact(Y, Z) + 1e-12);
  }
  // Zero exactly on a relabeled copy.
  auto X = random_space(rng, 4);
  std::vector<int> perm{2, 0, 3, 1};
  CHECK(gh_distance_exact(X, X.subspace(perm)) == 0.0);
  CHECK(gh_distance_exact(X, random_space(rng, 4)) > 0.0);
  CHECK_THROWS_AS(gh_distance_exact(random_space(rng, 9), X), DomainError);
}

TEST_CASE("bounds bracket the exact value") {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    auto X = random_space(rng, 1 + t % 8), Y = random_space(rng, 1 + (t * 5) % 8);
    double e = gh_distance_exact(X, Y);
    auto b = gh_bounds(X, Y);
    CHECK(b.lower <= e + 1e-12);
    CHECK(e <= b.upper + 1e-12);
    CHECK(is_correspondence(X, Y, b.correspondence));
  }
  auto X = random_space(rng, 6);
  auto same = gh_bounds(X, X);
  CHECK(same.lower == 0.0);
  CHECK(same.upper == 0.0);

  Net a(make_circle(1.0), 0.05), c(make_circle(1.1), 0.055);
  REQUIRE(a.size() == 20);
  REQUIRE(c.size() == 20);
  auto b = gh_bounds(FiniteMetricSpace::of_net(a), FiniteMetricSpace::of_net(c));
  CHECK(b.upper <= 0.06);
  CHECK(b.lower <= b.upper);
}

TEST_CASE("scaling sigma-isometries") {
  Net n1(make_circle(1.0), 0.05);
  auto id = scaling_sigma_isometry(n1, make_circle(1.0));
  CHECK(id.m() == 0.0);
  CHECK(id.b() == 0.0);
  CHECK(id.preserves_basepoint());

  Net half(make_circle(0.5), 0.05);
  auto dbl = scaling_sigma_isometry(half, make_circle(1.0));
  CHECK(dbl.m() == doctest::Approx(1.0));

  Net t4(make_torus_grid(0.75 / 3, 1.25 / 3, 12), 1.25 / 12);
  auto ft = scaling_sigma_isometry(t4, make_torus_grid(1.0 / 3, 1.0 / 3, 12));
  CHECK(ft.m() <= 1.0 / 3 + 1e-9);
  for (std::size_t i = 0; i < t4.size(); ++i) CHECK(ft.table()[i] == t4.point(i));

  CHECK_THROWS_AS(scaling_sigma_isometry(n1, make_torus_grid(1, 1, 12)), DomainError);
  CHECK_THROWS_AS(scaling_sigma_isometry(t4, make_torus_grid(1, 1, 6)), DomainError);

  auto p = DistortionPolynomial::of(0.01, 1.0);
  CHECK(p.m == doctest::Approx(0.0416));
  CHECK(p.b == doctest::Approx(0.0104));
  CHECK(DistortionPolynomial::of(0.0, 0.3)(5.0) == 0.0);
}

TEST_CASE("induced maps on chains") {
  auto src = make_circle(0.875);
  HomotopyEngine se(src, 0.005);
  auto dst = make_circle(1.0);
  HomotopyEngine de(dst, 0.005);
  auto f = scaling_sigma_isometry(se.net(), dst);
  auto idf = scaling_sigma_isometry(de.net(), dst);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.875);
  for (int t = 0; t < 20; ++t) {
    Chain a{{src.point(0, 0.0)}, 0.2};
    for (int k = 0; k < 6; ++k) a.points.push_back(src.along(a.points.back(), src.point(0, u(rng)), 0.5));
    a = refine_to_scale(src, Chain{a.points, 1.0}, 0.1);
    a.scale = 0.2;
    std::size_t cut = 1 + t % (a.points.size() - 1);
    Chain left{{a.points.begin(), a.points.begin() + cut + 1}, 0.2};
    Chain right{{a.points.begin() + cut, a.points.end()}, 0.2};
    auto whole = induced_map(f, a, 0.3);
    auto joined = concat(induced_map(f, left, 0.3), induced_map(f, right, 0.3));
    CHECK(whole.points == joined.points);
    Chain same = a;
    same.scale = 0.3;
    Chain onto = induced_map(idf, Chain{{dst.point(0, 0.1), dst.point(0, 0.2)}, 0.2}, 0.3);
    CHECK(onto.points[1] == dst.point(0, 0.2));
  }

  Chain around{{}, 0.3};
  for (int k = 0; k <= 5; ++k) around.points.push_back(src.point(0, 0.875 * (k % 5) / 5));
  CHECK(se.h1_class(around).coords == std::vector<std::int64_t>{});  // dead at 0.3
  around.scale = 0.25;
  auto img = induced_map(f, around, 0.3);
  CHECK(std::abs(de.h1_class(img).coords.at(0)) == 1);
  Chain lifted = around;
  lifted.scale = 0.2;
  CHECK_THROWS_AS(induced_map(f, lifted, 0.19), DomainError);
}

TEST_CASE("p-isometry check on shrinking circles") {
  auto dst = make_circle(1.0);
  HomotopyEngine de(dst, 0.005);
  const double eps = 1.0 / 3, omega0 = eps / 2 + 1e-3, delta = balanced_delta(omega0, eps);
  {
    HomotopyEngine se(make_circle(1.0 - 1.0 / 8), 0.005);
    auto f = scaling_sigma_isometry(se.net(), dst);
    CHECK_THROWS_WITH_AS(check_p_isometry(f, se, de, omega0, 0.3, eps, 1.0), doctest::Contains("sigma < eps - delta"),
                         DomainError);
  }
  HomotopyEngine se(make_circle(1.0 - 1.0 / 16), 0.005);
  auto f = scaling_sigma_isometry(se.net(), dst);
  auto rep = check_p_isometry(f, se, de, omega0, delta, eps, 1.0);
  CHECK(rep.ok);
  CHECK(rep.pairs > 1000);
  CHECK(rep.p.m == doctest::Approx(DistortionPolynomial::of(f.sigma(), eps).m));
  CHECK_THROWS_WITH_AS(check_p_isometry(f, se, de, 0.3, 0.29, eps, 1.0), doctest::Contains("omega0 < delta"),
                       DomainError);
  // A target with a critical value inside [omega0, eps).
  HomotopyEngine small(make_circle(0.9), 0.005);
  auto g = scaling_sigma_isometry(se.net(), make_circle(0.9));
  CHECK_THROWS_WITH_AS(check_p_isometry(g, se, small, omega0, delta, eps, 1.0), doctest::Contains("critical value"),
                       DomainError);

  auto id = scaling_sigma_isometry(de.net(), dst);
  auto zero = check_p_isometry(id, de, de, omega0, delta, eps, 1.0);
  CHECK(zero.p.m == 0.0);
  CHECK(zero.p.b == 0.0);
  CHECK(zero.max_excess <= 0.0101);  // snapping only
}

TEST_CASE("induced map commutes with deck transformations") {
  auto src = make_circle(1.0 - 1.0 / 16);
  HomotopyEngine se(src, 0.005);
  auto dst = make_circle(1.0);
  HomotopyEngine de(dst, 0.005);
  auto f = scaling_sigma_isometry(se.net(), dst);
  CoverBall a(se, 0.3, 1.5), b(de, 1.0 / 3, 2.0);
  std::vector<char> exact;
  auto F = induced_node_map(f, a, b, &exact);
  Chain loop{{}, 0.3};
  for (int k = 0; k <= 4; ++k) loop.points.push_back(src.point(0, src.edge(0).length * (k % 4) / 4));
  auto ds = deck_action(a, loop);
  auto dt = deck_action(b, induced_map(f, loop, 1.0 / 3));
  int tested = 0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (!exact[x] || ds[x] < 0 || !exact[ds[x]] || dt[F[x]] < 0) continue;
    ++tested;
    CHECK(F[ds[x]] == dt[F[x]]);
  }
  CHECK(tested > 50);

  // Quotients by the deck group: orbit distance against the base.
  auto orbit = [](const CoverBall& ball, std::size_t i, std::size_t j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ball.size(); ++k)
      if (ball.node(k).point == ball.node(j).point) best = std::min(best, ball.distance(i, k));
    return best;
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); i += 7)
    for (std::size_t j = 0; j < a.size(); j += 5) {
      if (a.node(i).norm > 0.4 || a.node(j).norm > 0.4 || !exact[i] || !exact[j]) continue;
      worst = std::max(worst, std::fabs(orbit(a, i, j) - orbit(b, F[i], F[j])));
    }
  CHECK(worst <= f.sigma() + 2 * (0.005 + 0.005));
}

TEST_CASE("convergence experiments") {
  ExperimentConfig c;
  c.family = "constant";
  c.indices = {2, 3};
  c.threads = 1;
  auto k = run_convergence_experiment(c);
  for (const auto& r : k.rows) CHECK(r.gh_upper <= 1e-9);

  ExperimentConfig t;
  t.threads = 2;
  auto rep = run_convergence_experiment(t);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.limit_deck.rank == 1);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].deck.rank == 1);
    CHECK(rep.rows[i].gh_lower <= rep.rows[i].gh_upper);
    if (i > 0) CHECK(rep.rows[i].gh_upper < rep.rows[i - 1].gh_upper);
  }
  ExperimentConfig bad;
  bad.family = "sphere";
  CHECK_THROWS_AS(run_convergence_experiment(bad), DomainError);
}

TEST_CASE("hawaiian stages") {
  auto st = hawaiian_demo(4, 0.2, 0.01, 1);
  REQUIRE(st.size() == 4);
  for (std::size_t i = 0; i < st.size(); ++i) {
    CHECK(st[i].valency == 2 * static_cast<int>(i + 1));
    CHECK(st[i].generation_certified);
  }
  // Loops of length 1 and 1/2 survive at 0.2 (critical values 1/3, 1/6 < 0.2 dies).
  CHECK(st[0].generators == 1);
  CHECK(st[3].generators == st[1].generators);
}
