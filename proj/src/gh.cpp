#include "epscov/gh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>

namespace epscov {

FiniteMetricSpace FiniteMetricSpace::from_matrix(const std::vector<std::vector<double>>& m) {
  FiniteMetricSpace s;
  s.size = m.size();
  for (const auto& row : m) {
    if (row.size() != m.size()) throw DomainError("distance matrix must be square");
    s.d.insert(s.d.end(), row.begin(), row.end());
  }
  for (std::size_t i = 0; i < s.size; ++i) {
    if (s(i, i) != 0.0) throw DomainError("distance matrix needs a zero diagonal");
    for (std::size_t j = 0; j < s.size; ++j)
      if (!(s(i, j) >= 0.0) || !nearly_equal(s(i, j), s(j, i)))
        throw DomainError("distance matrix must be symmetric and nonnegative");
  }
  return s;
}

FiniteMetricSpace FiniteMetricSpace::of_net(const Net& net) {
  FiniteMetricSpace s;
  s.size = net.size();
  s.d.resize(s.size * s.size);
  for (std::size_t i = 0; i < s.size; ++i)
    for (std::size_t j = 0; j < s.size; ++j) s.d[i * s.size + j] = net.distance(i, j);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::net_ball(const Net& net, int center, double radius, std::vector<int>* ids) {
  std::vector<int> keep;
  for (std::size_t i = 0; i < net.size(); ++i)
    if (net.distance(center, i) <= radius + kTol) keep.push_back(static_cast<int>(i));
  if (ids) *ids = keep;
  return of_net(net).subspace(keep);
}

FiniteMetricSpace FiniteMetricSpace::of_ball(const CoverBall& ball) {
  FiniteMetricSpace s;
  s.size = ball.size();
  s.d.resize(s.size * s.size);
  for (std::size_t i = 0; i < s.size; ++i)
    for (std::size_t j = 0; j < s.size; ++j) s.d[i * s.size + j] = ball.distance(i, j);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<int>& ids) const {
  FiniteMetricSpace s;
  s.size = ids.size();
  s.d.resize(s.size * s.size);
  for (std::size_t i = 0; i < s.size; ++i)
    for (std::size_t j = 0; j < s.size; ++j) s.d[i * s.size + j] = (*this)(ids[i], ids[j]);
  return s;
}

double distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Correspondence& c) {
  double worst = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b)
      worst = std::max(worst, std::fabs(X(c[a].first, c[b].first) - Y(c[a].second, c[b].second)));
  return worst;
}

bool is_correspondence(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Correspondence& c) {
  std::vector<char> hx(X.size, 0), hy(Y.size, 0);
  for (auto [x, y] : c) {
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= X.size || static_cast<std::size_t>(y) >= Y.size) return false;
    hx[x] = hy[y] = 1;
  }
  return std::all_of(hx.begin(), hx.end(), [](char v) { return v; }) &&
         std::all_of(hy.begin(), hy.end(), [](char v) { return v; });
}

namespace {

// Is there a relation covering X and Y with distortion <= t?
bool feasible(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, double t) {
  const std::size_t nx = X.size, ny = Y.size, np = nx * ny;
  std::vector<std::uint64_t> compat(np, 0);
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t q = 0; q < np; ++q)
      if (std::fabs(X(p / ny, q / ny) - Y(p % ny, q % ny)) <= t + 1e-12) compat[p] |= std::uint64_t{1} << q;
  std::vector<std::uint64_t> row_of(nx, 0), col_of(ny, 0);
  for (std::size_t p = 0; p < np; ++p) {
    row_of[p / ny] |= std::uint64_t{1} << p;
    col_of[p % ny] |= std::uint64_t{1} << p;
  }
  std::function<bool(std::uint64_t, std::uint64_t, std::uint64_t)> go = [&](std::uint64_t allowed, std::uint64_t rows,
                                                                             std::uint64_t cols) -> bool {
    // Pick the uncovered row or column with the fewest admissible pairs.
    int best = -1;
    bool best_row = true;
    int fewest = 65;
    for (std::size_t x = 0; x < nx; ++x)
      if (!(rows >> x & 1)) {
        int k = __builtin_popcountll(allowed & row_of[x]);
        if (k < fewest) fewest = k, best = static_cast<int>(x), best_row = true;
      }
    for (std::size_t y = 0; y < ny; ++y)
      if (!(cols >> y & 1)) {
        int k = __builtin_popcountll(allowed & col_of[y]);
        if (k < fewest) fewest = k, best = static_cast<int>(y), best_row = false;
      }
    if (best < 0) return true;
    if (fewest == 0) return false;
    std::uint64_t options = allowed & (best_row ? row_of[best] : col_of[best]);
    while (options) {
      int p = __builtin_ctzll(options);
      options &= options - 1;
      if (go(allowed & compat[p], rows | std::uint64_t{1} << (p / ny), cols | std::uint64_t{1} << (p % ny)))
        return true;
    }
    return false;
  };
  std::uint64_t all = np == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << np) - 1);
  return go(all, 0, 0);
}

std::vector<double> distance_values(const FiniteMetricSpace& X) {
  std::vector<double> v(X.d);
  v.push_back(0.0);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double directed_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (double x : a) {
    auto it = std::lower_bound(b.begin(), b.end(), x);
    double best = std::numeric_limits<double>::infinity();
    if (it != b.end()) best = *it - x;
    if (it != b.begin()) best = std::min(best, x - *std::prev(it));
    worst = std::max(worst, best);
  }
  return worst;
}

// Map every point of X to Y, minimizing the worst anchor mismatch.
std::vector<int> anchored_map(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Correspondence& anchors) {
  std::vector<int> phi(X.size, 0);
  for (std::size_t x = 0; x < X.size; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < Y.size; ++y) {
      double worst = 0.0;
      for (auto [ax, ay] : anchors) {
        worst = std::max(worst, std::fabs(X(x, ax) - Y(y, ay)));
        if (worst >= best) break;
      }
      if (worst < best - 1e-12) best = worst, phi[x] = static_cast<int>(y);
    }
  }
  return phi;
}

// Reassign each point to the partner that least distorts it against the rest.
void improve(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, std::vector<int>& phi, std::vector<int>& psi) {
  auto worst_for = [&](std::size_t x, std::size_t y, std::size_t skip_x, std::size_t skip_y, double cap) {
    double w = 0.0;
    for (std::size_t a = 0; a < phi.size() && w < cap; ++a)
      if (a != skip_x) w = std::max(w, std::fabs(X(x, a) - Y(y, phi[a])));
    for (std::size_t b = 0; b < psi.size() && w < cap; ++b)
      if (b != skip_y) w = std::max(w, std::fabs(X(x, psi[b]) - Y(y, b)));
    return w;
  };
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (std::size_t x = 0; x < X.size; ++x) {
      double best = worst_for(x, phi[x], x, none, std::numeric_limits<double>::infinity());
      for (std::size_t y = 0; y < Y.size; ++y) {
        double w = worst_for(x, y, x, none, best);
        if (w < best - 1e-12) best = w, phi[x] = static_cast<int>(y), changed = true;
      }
    }
    for (std::size_t y = 0; y < Y.size; ++y) {
      double best = worst_for(psi[y], y, none, y, std::numeric_limits<double>::infinity());
      for (std::size_t x = 0; x < X.size; ++x) {
        double w = worst_for(x, y, none, y, best);
        if (w < best - 1e-12) best = w, psi[y] = static_cast<int>(x), changed = true;
      }
    }
    if (!changed) break;
  }
}

}  // namespace

double gh_distance_exact(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  if (X.size == 0 || Y.size == 0) throw DomainError("Gromov-Hausdorff distance needs nonempty spaces");
  if (X.size > 8 || Y.size > 8) throw DomainError("exact Gromov-Hausdorff distance is limited to 8 points; use gh_bounds");
  std::vector<double> cand{0.0};
  for (double a : distance_values(X))
    for (double b : distance_values(Y)) cand.push_back(std::fabs(a - b));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible(X, Y, cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo] / 2;
}

double gh_lower_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  auto a = distance_values(X), b = distance_values(Y);
  return std::max(directed_gap(a, b), directed_gap(b, a)) / 2;
}

GhBounds gh_bounds_from(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, Correspondence c) {
  if (!is_correspondence(X, Y, c)) throw DomainError("relation does not cover both spaces");
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  GhBounds out;
  out.lower = gh_lower_bound(X, Y);
  out.upper = distortion(X, Y, c) / 2;
  out.correspondence = std::move(c);
  return out;
}

GhBounds gh_bounds(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, Correspondence anchors) {
  if (X.size == 0 || Y.size == 0) throw DomainError("Gromov-Hausdorff bounds need nonempty spaces");
  if (anchors.empty()) anchors.push_back({0, 0});
  const std::size_t max_anchors = 8;
  while (anchors.size() < std::min({max_anchors, X.size, Y.size})) {
    int far = -1;
    double fd = -1.0;
    for (std::size_t x = 0; x < X.size; ++x) {
      double near = std::numeric_limits<double>::infinity();
      for (auto [ax, ay] : anchors) near = std::min(near, X(x, ax));
      if (near > fd + 1e-12) fd = near, far = static_cast<int>(x);
    }
    if (fd <= kTol) break;
    // Best partner for the new anchor against the existing ones.
    int partner = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < Y.size; ++y) {
      double worst = 0.0;
      for (auto [ax, ay] : anchors) worst = std::max(worst, std::fabs(X(far, ax) - Y(y, ay)));
      if (worst < best - 1e-12) best = worst, partner = static_cast<int>(y);
    }
    anchors.push_back({far, partner});
  }
  auto phi = anchored_map(X, Y, anchors);
  Correspondence flipped;
  for (auto [a, b] : anchors) flipped.push_back({b, a});
  auto psi = anchored_map(Y, X, flipped);
  for (auto [a, b] : anchors) phi[a] = b;
  const double work = static_cast<double>(X.size) * Y.size * (X.size + Y.size);
  if (work <= 5e7) improve(X, Y, phi, psi);
  Correspondence c;
  for (std::size_t x = 0; x < X.size; ++x) c.push_back({static_cast<int>(x), phi[x]});
  for (std::size_t y = 0; y < Y.size; ++y) c.push_back({psi[y], static_cast<int>(y)});
  return gh_bounds_from(X, Y, std::move(c));
}

DistortionPolynomial DistortionPolynomial::of(double sigma, double eps) {
  if (!(sigma >= 0.0) || !(eps > 0.0)) throw DomainError("distortion polynomial needs sigma >= 0 and eps > 0");
  return DistortionPolynomial{sigma * (4 / eps + 16 * sigma / (eps * eps)), sigma * (4 * sigma / eps + 1)};
}

SigmaIsometry::SigmaIsometry(const Net& source, MetricGraph target, Map f, bool invertible)
    : source_(source.graph()), target_(std::move(target)), f_(std::move(f)) {
  for (const auto& p : source.points()) table_.push_back(f_(p));
  double ratio = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = i + 1; j < source.size(); ++j) {
      double d = source.distance(i, j), e = target_.distance(table_[i], table_[j]);
      sigma_ = std::max(sigma_, std::fabs(d - e));
      if (d > kTol) ratio = std::max(ratio, std::fabs(d - e) / d);
    }
  if (invertible) {
    m_ = ratio;
    b_ = 0.0;
  } else {
    m_ = 0.0;
    b_ = sigma_;
  }
}

bool SigmaIsometry::preserves_basepoint() const { return f_(GraphPoint::at_vertex(0)) == GraphPoint::at_vertex(0); }

SigmaIsometry scaling_sigma_isometry(const Net& source, const MetricGraph& target) {
  const MetricGraph& s = source.graph();
  const auto& ts = s.tag();
  const auto& tt = target.tag();
  if (ts.family == Family::Generic || ts.family != tt.family)
    throw DomainError("scaling maps need two members of the same generated family");
  if (ts.family == Family::TorusGrid && ts.n != tt.n) throw DomainError("torus grids must have equal n");
  if (s.num_vertices() != target.num_vertices() || s.num_edges() != target.num_edges())
    throw DomainError("scaling maps need equal combinatorics");
  std::vector<double> ratio(s.num_edges());
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& a = s.edge(e);
    const Edge& b = target.edge(e);
    if (a.u != b.u || a.v != b.v) throw DomainError("scaling maps need equal combinatorics");
    ratio[e] = b.length / a.length;
  }
  auto f = [target, ratio](const GraphPoint& p) {
    if (p.is_vertex()) return p;
    return target.point(p.edge, p.offset * ratio[p.edge]);
  };
  return SigmaIsometry(source, target, f, true);
}

Chain induced_map(const SigmaIsometry& f, const Chain& chain, double eps) {
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) {
    double g = f.source().distance(chain.points[i], chain.points[i + 1]);
    double grown = g + f.m() * g + f.b();
    if (!strictly_less(grown, eps)) {
      std::ostringstream msg;
      msg << "gap " << i << " of length " << g << " grows to " << grown << ", not below " << eps;
      throw DomainError(msg.str());
    }
  }
  Chain out{{}, eps};
  for (const auto& p : chain.points) out.points.push_back(f(p));
  require_valid(f.target(), out);
  return out;
}

namespace {

int direct_image(const SigmaIsometry& f, const CoverBall& source, const CoverBall& target, std::size_t i) {
  Chain img = induced_map(f, source.chain_to(i), target.scale());
  auto ids = target.engine().snap(img).ids;
  int j = target.find(ids.back(), target.group().of_net_path(ids));
  return j >= 0 && static_cast<std::size_t>(j) < target.size() ? j : -1;
}

std::vector<int> node_map(const SigmaIsometry& f, const CoverBall& source, const CoverBall& target,
                          std::vector<char>* exact) {
  std::vector<int> out(source.size(), -1);
  if (exact) exact->assign(source.size(), 0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    int j = direct_image(f, source, target, i);
    if (j >= 0) {
      out[i] = j;
      if (exact) (*exact)[i] = 1;
    } else if (source.node(i).parent >= 0) {
      out[i] = out[source.node(i).parent];
    }
  }
  return out;
}

}  // namespace

std::vector<int> induced_node_map(const SigmaIsometry& f, const CoverBall& source, const CoverBall& target,
                                  std::vector<char>* exact) {
  return node_map(f, source, target, exact);
}

PCheckReport check_p_isometry(const SigmaIsometry& f, const HomotopyEngine& source, const HomotopyEngine& target,
                              double omega0, double delta, double eps, double radius, const SearchBudget& budget,
                              std::size_t max_pairs) {
  PCheckReport rep;
  rep.sigma = f.sigma();
  rep.omega0 = omega0;
  rep.delta = delta;
  rep.eps = eps;
  auto refuse = [](const std::string& why) { throw DomainError("premise failed: " + why); };
  std::ostringstream msg;
  msg.precision(6);
  if (!f.preserves_basepoint()) refuse("f preserves the basepoint");
  if (!(omega0 < delta)) refuse("omega0 < delta");
  if (!(delta < eps)) refuse("delta < eps");
  if (!(omega0 > 2 * target.net().resolution())) refuse("omega0 > 2 * target resolution");
  if (!(rep.sigma < eps - delta)) {
    msg << "sigma < eps - delta (" << rep.sigma << " vs " << eps - delta << ")";
    refuse(msg.str());
  }
  if (!(rep.sigma < (delta - omega0) / 4)) {
    msg << "sigma < (delta - omega0) / 4 (" << rep.sigma << " vs " << (delta - omega0) / 4 << ")";
    refuse(msg.str());
  }
  SpectrumOptions scan{omega0, eps, 2 * target.net().resolution(), budget, 1};
  auto spec = critical_spectrum(target, scan);
  if (!spec.unresolved.empty()) refuse("target critical values in [omega0, eps) could not be decided");
  for (const auto& e : spec.entries)
    if (strictly_less(e.value, eps) && e.value >= omega0 - kTol) {
      msg << "no target critical value in [omega0, eps) (found " << e.value << ")";
      refuse(msg.str());
    }

  rep.p = DistortionPolynomial::of(rep.sigma, eps);
  CoverBall src(source, delta, radius);
  double reach = radius * (1 + rep.p.m) + rep.p.b + 2 * target.net().resolution();
  CoverBall dst(target, eps, reach);
  std::vector<char> exact;
  auto img = node_map(f, src, dst, &exact);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = src.size();
  if (n * (n - 1) / 2 <= max_pairs) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  } else {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (pairs.size() < max_pairs) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i != j) pairs.push_back({i, j});
    }
  }
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (auto [i, j] : pairs) {
    if (!exact[i] || !exact[j]) {
      ++rep.skipped;
      continue;
    }
    ++rep.pairs;
    double d = src.distance(i, j), e = dst.distance(img[i], img[j]);
    double bound = rep.p(d);
    double dev = std::fabs(d - e);
    rep.max_excess = std::max(rep.max_excess, dev - bound);
    if (bound > 0) rep.max_ratio = std::max(rep.max_ratio, dev / bound);
    else if (dev > kTol) rep.max_ratio = std::numeric_limits<double>::infinity();
  }
  if (rep.pairs == 0) rep.max_excess = 0.0;
  rep.ok = rep.max_excess <= kTol;
  return rep;
}

namespace {

Correspondence ball_correspondence(const std::vector<int>& forward, const std::vector<int>& backward) {
  Correspondence c;
  for (std::size_t x = 0; x < forward.size(); ++x)
    if (forward[x] >= 0) c.push_back({static_cast<int>(x), forward[x]});
  for (std::size_t y = 0; y < backward.size(); ++y)
    if (backward[y] >= 0) c.push_back({backward[y], static_cast<int>(y)});
  return c;
}

GhBounds compare_balls(const CoverBall& a, const CoverBall& b) {
  auto fa = scaling_sigma_isometry(a.engine().net(), b.engine().graph());
  auto fb = scaling_sigma_isometry(b.engine().net(), a.engine().graph());
  auto c = ball_correspondence(induced_node_map(fa, a, b), induced_node_map(fb, b, a));
  auto X = FiniteMetricSpace::of_ball(a), Y = FiniteMetricSpace::of_ball(b);
  if (!is_correspondence(X, Y, c)) return gh_bounds(X, Y);
  return gh_bounds_from(X, Y, std::move(c));
}

std::vector<Triad> limit_triads(const ExperimentConfig& cfg, const HomotopyEngine& limit, double r_of_last) {
  int last = *std::max_element(cfg.indices.begin(), cfg.indices.end());
  double s = 1.0 - 1.0 / last, t = 1.0 + 1.0 / last;
  auto g = make_torus_grid(s / 3, t / 3, cfg.grid);
  HomotopyEngine eng(g, r_of_last);
  double lo = std::max(cfg.eps * (1 - 2.0 / last), 2 * r_of_last + 1e-6);
  SpectrumOptions opt{lo, cfg.eps - 1e-6, cfg.eta, cfg.budget, cfg.threads};
  auto rep = critical_spectrum(eng, opt);
  if (!rep.complete()) throw UnresolvedError("spectrum of index " + std::to_string(last) + " has undecided triads");
  auto f = scaling_sigma_isometry(eng.net(), limit.graph());
  std::vector<Triad> out;
  for (const auto& e : rep.entries)
    for (const auto& tr : e.representatives) {
      int a = limit.net().nearest(f(tr.points[0]));
      int b = limit.net().nearest(f(tr.points[1]));
      int c = limit.net().nearest(f(tr.points[2]));
      if (a == b || b == c || a == c) continue;
      out.push_back(make_triad(limit.net(), a, b, c, cfg.eta));
    }
  if (out.empty()) throw UnresolvedError("no triads below the scale in the last member of the family");
  return out;
}

void fill_deck(ExperimentRow& row, const CoverBall& ball) {
  row.deck = quotient_group_invariants(ball);
  row.ball_size = ball.size();
}

}  // namespace

ExperimentReport run_convergence_experiment(const ExperimentConfig& cfg) {
  if (cfg.indices.empty()) throw DomainError("experiment needs at least one index");
  for (int i : cfg.indices)
    if (i < 2) throw DomainError("family indices start at 2");
  if (!(cfg.eps > 0) || !(cfg.radius > 0)) throw DomainError("eps and radius must be positive");
  ExperimentReport rep;
  rep.config = cfg;
  rep.rows.resize(cfg.indices.size());
  unsigned threads = cfg.threads ? cfg.threads : default_threads();

  if (cfg.family == "torus") {
    const int n = cfg.grid;
    double rl = cfg.resolution > 0 ? cfg.resolution : 1.0 / n;
    auto lg = make_torus_grid(1.0 / 3, 1.0 / 3, n);
    HomotopyEngine limit(lg, rl);
    int last = *std::max_element(cfg.indices.begin(), cfg.indices.end());
    double r_last = cfg.resolution > 0 ? cfg.resolution : (1.0 + 1.0 / last) / n;
    rep.limit_triads = limit_triads(cfg, limit, r_last);
    CoverBall lball(limit, cfg.eps, cfg.radius, KernelSpec{rep.limit_triads, {}});
    rep.limit_deck = quotient_group_invariants(lball);
    rep.limit_ball_size = lball.size();
    rep.limit_resolution = rl;
    parallel_for(cfg.indices.size(), threads, [&](std::size_t k) {
      int i = cfg.indices[k];
      auto g = make_torus_grid((1.0 - 1.0 / i) / 3, (1.0 + 1.0 / i) / 3, n);
      double r = cfg.resolution > 0 ? cfg.resolution : (1.0 + 1.0 / i) / n;
      HomotopyEngine eng(g, r);
      CoverBall ball(eng, cfg.eps, cfg.radius);
      ExperimentRow& row = rep.rows[k];
      row.index = i;
      row.resolution = r;
      row.sigma = scaling_sigma_isometry(eng.net(), lg).sigma();
      fill_deck(row, ball);
      auto b = compare_balls(ball, lball);
      row.gh_lower = b.lower;
      row.gh_upper = b.upper;
    });
  } else if (cfg.family == "circle" || cfg.family == "constant") {
    const bool constant = cfg.family == "constant";
    double r = cfg.resolution > 0 ? cfg.resolution : 0.005;
    auto lg = make_circle(1.0);
    HomotopyEngine limit(lg, r);
    double tau = constant ? cfg.eps : cfg.tau;
    CoverBall tball(limit, tau, cfg.radius);
    CoverBall line(limit, cfg.eps, cfg.radius);
    rep.limit_deck = quotient_group_invariants(tball);
    rep.limit_ball_size = tball.size();
    rep.limit_resolution = r;
    const double omega0 = cfg.eps / 2 + 1e-3;
    const double delta = balanced_delta(omega0, cfg.eps);
    parallel_for(cfg.indices.size(), threads, [&](std::size_t k) {
      int i = cfg.indices[k];
      auto g = make_circle(constant ? 1.0 : 1.0 - 1.0 / i);
      HomotopyEngine eng(g, r);
      CoverBall ball(eng, cfg.eps, cfg.radius);
      ExperimentRow& row = rep.rows[k];
      row.index = i;
      row.resolution = r;
      auto f = scaling_sigma_isometry(eng.net(), lg);
      row.sigma = f.sigma();
      fill_deck(row, ball);
      auto X = FiniteMetricSpace::of_ball(ball);
      auto b = compare_balls(ball, tball);
      row.gh_lower = b.lower;
      row.gh_upper = b.upper;
      if (constant) return;
      // The cover against the space's own ball, matched by projection.
      std::vector<int> ids;
      auto own = FiniteMetricSpace::net_ball(eng.net(), eng.basepoint(), cfg.radius, &ids);
      std::vector<int> slot(eng.net().size(), -1);
      for (std::size_t s = 0; s < ids.size(); ++s) slot[ids[s]] = static_cast<int>(s);
      Correspondence proj;
      for (std::size_t x = 0; x < ball.size(); ++x)
        if (slot[ball.node(x).point] >= 0) proj.push_back({static_cast<int>(x), slot[ball.node(x).point]});
      row.own_ball_upper =
          is_correspondence(X, own, proj) ? gh_bounds_from(X, own, proj).upper : gh_bounds(X, own).upper;
      row.line_lower = gh_lower_bound(X, FiniteMetricSpace::of_ball(line));
      try {
        row.p = check_p_isometry(f, eng, limit, omega0, delta, cfg.eps, cfg.radius, cfg.budget);
        row.p_checked = true;
      } catch (const DomainError& e) {
        row.note = std::string("p-check refused: ") + e.what();
      }
    });
  } else {
    throw DomainError("unknown experiment family " + cfg.family);
  }
  return rep;
}

std::vector<HawaiianStage> hawaiian_demo(int k, double eps, double resolution, unsigned threads) {
  if (k < 1) throw DomainError("hawaiian demo needs k >= 1");
  std::vector<HawaiianStage> out;
  for (int s = 1; s <= k; ++s) {
    auto g = make_hawaiian_stage(s);
    HomotopyEngine eng(g, resolution);
    auto rep = lollichain_generators(eng, eps, 2 * resolution, {}, threads);
    HawaiianStage st;
    st.k = s;
    st.valency = 2 * s;
    st.generators = rep.chains.size();
    st.shortest_loop = std::ldexp(1.0, -(s - 1));
    st.generation_certified = rep.full_generation_certified;
    out.push_back(st);
  }
  return out;
}

}  // namespace epscov
