// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "epscov/gh.hpp"

using namespace epscov;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail, double seconds) {
  std::printf("%s [%d] %s: %s (%.2fs)\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class F>
void criterion(int id, const std::string& what, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, what, pass, detail, s);
}

std::string f6(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

SpectrumReport circle_report, rect_report, square_report;
double circle_seconds = 0, torus_seconds = 0;

GraphPoint random_point(const MetricGraph& g, std::mt19937& rng) {
  std::uniform_int_distribution<int> e(0, g.num_edges() - 1);
  int k = e(rng);
  std::uniform_real_distribution<double> u(0.0, g.edge(k).length);
  return g.point(k, u(rng));
}

}  // namespace

int main() {
  criterion(1, "circle spectrum", [](std::string& d) {
    auto t0 = std::chrono::steady_clock::now();
    HomotopyEngine eng(make_circle(1.0), 0.02);
    circle_report = critical_spectrum(eng, SpectrumOptions{0.05, 0.9, 0.04, {}, 0});
    circle_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& r = circle_report;
    d = std::to_string(r.entries.size()) + " entries";
    if (r.entries.size() != 1) return false;
    const auto& e = r.entries[0];
    d += ", value " + f6(e.value) + " multiplicity " + std::to_string(e.multiplicity) + " " + to_string(e.certainty);
    return std::fabs(e.value - 1.0 / 3) <= 0.06 && e.multiplicity == 1 && e.certainty == Certainty::Certain &&
           r.complete() && circle_seconds <= 60;
  });

  criterion(2, "torus spectra", [](std::string& d) {
    auto t0 = std::chrono::steady_clock::now();
    const double step = 1.0 / 12;
    HomotopyEngine rect(make_torus_grid(1.0 / 3, 2.0 / 3, 12), step);
    rect_report = critical_spectrum(rect, SpectrumOptions{0.2, 0.75, 0.02, {}, 0});
    HomotopyEngine sq(make_torus_grid(1.0 / 3, 1.0 / 3, 12), step);
    square_report = critical_spectrum(sq, SpectrumOptions{0.2, 0.75, 0.02, {}, 0});
    torus_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = rect_report.complete() && square_report.complete();
    d = "rect {";
    for (const auto& e : rect_report.entries) d += " " + f6(e.value) + "x" + std::to_string(e.multiplicity);
    d += " } square {";
    for (const auto& e : square_report.entries) d += " " + f6(e.value) + "x" + std::to_string(e.multiplicity);
    d += " }";
    ok = ok && rect_report.entries.size() == 2 && square_report.entries.size() == 1;
    if (!ok) return false;
    // Entries are sorted by decreasing value.
    ok = std::fabs(rect_report.entries[0].value - 2.0 / 3) <= step && rect_report.entries[0].multiplicity == 1 &&
         std::fabs(rect_report.entries[1].value - 1.0 / 3) <= step && rect_report.entries[1].multiplicity == 1 &&
         std::fabs(square_report.entries[0].value - 1.0 / 3) <= step && square_report.entries[0].multiplicity == 2;
    return ok && torus_seconds <= 600;
  });

  criterion(3, "covering spectrum is 3/2 of the critical spectrum", [](std::string& d) {
    int checked = 0;
    bool ok = true;
    for (const auto* r : {&circle_report, &rect_report, &square_report}) {
      auto cov = covering_spectrum(*r);
      ok = ok && cov.size() == r->entries.size();
      for (std::size_t i = 0; ok && i < cov.size(); ++i, ++checked)
        ok = cov[i].value == 1.5 * r->entries[i].value && cov[i].multiplicity == r->entries[i].multiplicity;
    }
    d = std::to_string(checked) + " values compared exactly";
    return ok && checked > 0;
  });

  criterion(4, "short loops are null with replayable witnesses", [](std::string& d) {
    struct Case {
      MetricGraph g;
      double r, eps;
    };
    std::vector<Case> cases{{make_circle(1.0), 0.02, 0.3},
                            {make_wedge({1.0, 2.0}), 1.0 / 48, 0.25},
                            {make_torus_grid(1.0 / 3, 1.0 / 3, 12), 1.0 / 12, 0.3}};
    std::mt19937 rng(2024);
    int nulls = 0, conflicts = 0, total = 0, bad_audit = 0;
    for (auto& c : cases) {
      HomotopyEngine eng(c.g, c.r);
      const GraphPoint base = eng.net().point(eng.basepoint());
      int made = 0;
      while (made < 67 - (&c == &cases[0] ? 1 : 0)) {
        std::uniform_int_distribution<int> corners(1, 3);
        Chain poly{{base}, 1.0};
        int k = corners(rng);
        for (int i = 0; i < k; ++i) {
          GraphPoint p = random_point(c.g, rng);
          if (std::uniform_int_distribution<int>(0, 1)(rng)) p = eng.net().point(eng.net().nearest(p));
          poly.points.push_back(p);
        }
        poly.points.push_back(base);
        poly.scale = 10.0;
        Chain loop = refine_to_scale(c.g, poly, c.eps * 0.9);
        loop.scale = c.eps;
        if (!(length(c.g, loop) < 3 * c.eps - 1e-6)) continue;
        ++made;
        ++total;
        auto v = eng.is_null(loop);
        if (v.kind == VerdictKind::Null) {
          ++nulls;
          if (!eng.audit(loop, v) || replay(c.g, v.witness).points.size() != 1) ++bad_audit;
        }
        if (v.kind == VerdictKind::NotNull || !eng.h1_class(loop).is_zero()) ++conflicts;
      }
    }
    d = std::to_string(nulls) + "/" + std::to_string(total) + " null, " + std::to_string(bad_audit) +
        " failed audits, " + std::to_string(conflicts) + " conflicts";
    return total == 200 && nulls == total && bad_audit == 0 && conflicts == 0;
  });

  criterion(5, "normalized point count and length", [](std::string& d) {
    auto g = make_torus_grid(1.0 / 3, 0.5, 6);
    std::mt19937 rng(77);
    int ok = 0;
    for (int t = 0; t < 100; ++t) {
      double eps = 0.3;
      Chain c{{GraphPoint::at_vertex(0)}, eps};
      int n = 2 + t % 15;
      for (int i = 0; i < n; ++i) {
        GraphPoint p = random_point(g, rng);
        c.points.push_back(g.along(c.points.back(), p, std::min(1.0, 0.25 / std::max(1e-9, g.distance(c.points.back(), p)))));
      }
      if (t % 3 == 0) c.points.insert(c.points.begin() + 2, c.points[1]);  // a repeated point
      double L = length(g, c);
      auto out = normalize_count(g, c, L);
      if (out.count() == static_cast<std::size_t>(std::floor(2 * L / eps + 1)) && length(g, out) <= L + 1e-12 &&
          is_valid(g, out) && out.points.front() == c.points.front() && out.points.back() == c.points.back())
        ++ok;
      else
        break;
    }
    d = std::to_string(ok) + "/100 chains";
    return ok == 100;
  });

  criterion(6, "circle covers below and above a/3", [](std::string& d) {
    const double r = 0.02;
    HomotopyEngine eng(make_circle(1.0), r);
    CoverBall line(eng, 0.3, 2.4);
    Net seg(make_segment(4.8), r);
    int mid = seg.nearest(make_segment(4.8).point(0, 2.4));
    auto a = gh_bounds(FiniteMetricSpace::of_ball(line), FiniteMetricSpace::of_net(seg), {{0, mid}});
    CoverBall same(eng, 0.4, 2.0);
    auto b = gh_bounds(FiniteMetricSpace::of_ball(same), FiniteMetricSpace::of_net(eng.net()));
    d = "line ball gh <= " + f6(a.upper) + ", circle ball gh <= " + f6(b.upper) + ", bound " + f6(2 * r);
    return a.upper <= 2 * r && b.upper <= 2 * r;
  });

  criterion(7, "classes dying between 0.3 and 0.4 are the triad kernel", [](std::string& d) {
    HomotopyEngine eng(make_circle(1.0), 0.02);
    auto t = make_triad(eng.net(), 0, 17, 33, 0.0);
    auto dying = theta_kernel_lattice(eng, 0.3, 0.4);
    auto killed = kernel_class_lattice(eng, 0.3, KernelSpec{{t}, {}});
    d = "kernel rows " + std::to_string(dying.size()) + ", triad rows " + std::to_string(killed.size());
    return dying == killed && !dying.empty();
  });

  criterion(8, "torus family converges to the cylinder", [](std::string& d) {
    ExperimentConfig c;
    auto rep = run_convergence_experiment(c);
    bool ok = rep.limit_deck.rank == 1 && rep.limit_deck.torsion.empty();
    double prev = std::numeric_limits<double>::infinity();
    d = "limit rank " + std::to_string(rep.limit_deck.rank);
    for (const auto& w : rep.rows) {
      double bound = 3.0 / w.index + 2 * rep.limit_resolution;
      d += ", i=" + std::to_string(w.index) + " gh<=" + f6(w.gh_upper) + " (bound " + f6(bound) + ") rank " +
           std::to_string(w.deck.rank);
      ok = ok && w.gh_upper < prev && w.gh_upper <= bound && w.deck.rank == 1 && w.deck.torsion.empty();
      prev = w.gh_upper;
    }
    return ok;
  });

  ExperimentReport circles;
  criterion(9, "shrinking circles converge to the circle, not the line", [&](std::string& d) {
    ExperimentConfig c;
    c.family = "circle";
    c.indices = {2, 4, 8, 16, 32};
    circles = run_convergence_experiment(c);
    const double res = circles.limit_resolution;
    bool ok = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& w : circles.rows) {
      d += "i=" + std::to_string(w.index) + " own " + f6(w.own_ball_upper) + " tau " + f6(w.gh_upper) + " line>=" +
           f6(w.line_lower) + "; ";
      ok = ok && w.deck.rank == 0 && w.own_ball_upper <= 2 * res && w.gh_upper < prev && w.line_lower >= 0.2;
      prev = w.gh_upper;
    }
    return ok && prev <= 2 * res;
  });

  criterion(10, "induced map distortion within p(sigma, eps)", [&](std::string& d) {
    int checked = 0;
    bool ok = true;
    for (const auto& w : circles.rows) {
      if (!w.p_checked) {
        d += "i=" + std::to_string(w.index) + " refused; ";
        continue;
      }
      ++checked;
      ok = ok && w.p.ok;
      d += "i=" + std::to_string(w.index) + " ratio " + f6(w.p.max_ratio) + " over " + std::to_string(w.p.pairs) +
           " pairs; ";
    }
    return ok && checked > 0;
  });

  criterion(11, "lollichain generators", [](std::string& d) {
    HomotopyEngine we(make_wedge({1.0, 2.0}), 1.0 / 48);
    auto w = lollichain_generators(we, 0.25, 0.03);
    IntMatrix rows;
    for (const auto& c : w.classes) rows.push_back(c.coords);
    std::size_t independent = hermite_normal_form(rows, rows.empty() ? 0 : rows[0].size()).size();
    HomotopyEngine ce(make_circle(1.0), 0.02);
    auto c = lollichain_generators(ce, 0.25, 0.04);
    HomotopyEngine te(make_segment(2.0), 0.05);
    auto t = lollichain_generators(te, 0.25, 0.05);
    d = "wedge " + std::to_string(w.chains.size()) + " (independent " + std::to_string(independent) + "), circle " +
        std::to_string(c.chains.size()) + ", tree " + std::to_string(t.chains.size());
    return w.chains.size() == 2 && independent == 2 && c.chains.size() == 1 && t.chains.empty() &&
           w.full_generation_certified && c.full_generation_certified && t.full_generation_certified;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
