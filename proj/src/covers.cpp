#include "epscov/covers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <queue>

namespace epscov {

namespace {

// Points of a geodesic from p to q with gaps below eps / 2.
Chain fine_segment(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q, double eps) {
  Chain c{{p, q}, g.distance(p, q) + 1.0};
  c = refine_to_scale(g, c, eps / 2);
  c.scale = eps;
  return c;
}

Chain fine_chain(const MetricGraph& g, Chain c, double eps) {
  double big = 0.0;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) big = std::max(big, g.distance(c.points[i], c.points[i + 1]));
  c.scale = std::max(big + 1.0, eps);
  c = refine_to_scale(g, c, eps / 2);
  c.scale = eps;
  return c;
}

}  // namespace

Chain lollichain(const HomotopyEngine& engine, const Triad& t, double eps, const std::vector<int>* anchor) {
  const MetricGraph& g = engine.graph();
  const Net& net = engine.net();
  Chain stem;
  if (anchor && !anchor->empty()) {
    if (anchor->front() != engine.basepoint() || anchor->back() != t.ids[0])
      throw DomainError("anchor must run from the basepoint to the triad's first point");
    stem = fine_chain(g, engine.net_chain(*anchor, eps), eps);
  } else {
    stem = fine_segment(g, net.point(engine.basepoint()), t.points[0], eps);
  }
  Chain loop = fine_chain(g, midpoint_refinement(g, triad_loop(t)), eps);
  Chain out = concat(concat(stem, loop), reverse(stem));
  require_valid(g, out);
  return out;
}

CoverGroup::CoverGroup(const HomotopyEngine& engine, double eps, const KernelSpec& kernel)
    : pres_(engine.presentation(eps)), eps_(eps) {
  std::vector<Word> extra;
  for (std::size_t i = 0; i < kernel.triads.size(); ++i) {
    const std::vector<int>* anchor = i < kernel.anchors.size() ? &kernel.anchors[i] : nullptr;
    Chain l = lollichain(engine, kernel.triads[i], eps, anchor);
    kernel_loops_.push_back(l);
    extra.push_back(engine.word(l));
  }
  group_ = extra.empty() ? pres_->group() : pres_->group().quotient(extra);
  switch (group_.kind()) {
    case GroupKind::Trivial:
    case GroupKind::Abelian:
      abelian_ = true;
      break;
    case GroupKind::Free:
      abelian_ = group_.num_generators() <= 1;
      break;
    case GroupKind::Unrecognized:
      throw UnresolvedError("cover group at scale " + std::to_string(eps) +
                            " is neither free nor abelian after simplification; node identification is undecided");
  }
}

CoverGroup::Element CoverGroup::of_raw(const Word& raw) const {
  Word w = group_.map_word(raw);
  if (abelian_) return group_.h1(w);
  return Element(w.begin(), w.end());
}

CoverGroup::Element CoverGroup::multiply(const Element& a, const Element& b) const {
  if (abelian_) {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = checked_add(a[i], b[i]);
    return group_.reduce_h1(std::move(c));
  }
  Word w;
  for (auto x : a) w.push_back(static_cast<int>(x));
  for (auto x : b) w.push_back(static_cast<int>(x));
  w = free_reduce(w);
  return Element(w.begin(), w.end());
}

CoverGroup::Element CoverGroup::invert(const Element& a) const {
  if (abelian_) {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
    return group_.reduce_h1(std::move(c));
  }
  Element c(a.rbegin(), a.rend());
  for (auto& x : c) x = -x;
  return c;
}

CoverBall::CoverBall(const HomotopyEngine& engine, double eps, double radius, const KernelSpec& kernel)
    : engine_(&engine), eps_(eps), radius_(radius), kernel_(kernel) {
  const Net& net = engine.net();
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  if (!(eps > 2 * net.resolution())) throw DomainError("scale must exceed twice the net resolution");
  group_ = std::make_shared<const CoverGroup>(engine, eps, kernel);
  const CoverGroup& grp = *group_;
  const auto& pres = grp.presentation();

  struct Step {
    int to;
    double length;
    CoverGroup::Element voltage;
  };
  std::vector<std::vector<Step>> steps(net.size());
  for (const auto& l : net.links()) {
    steps[l.a].push_back(Step{l.b, l.length, grp.of_raw(pres.edge_word(l.a, l.b))});
    steps[l.b].push_back(Step{l.a, l.length, grp.of_raw(pres.edge_word(l.b, l.a))});
  }

  // Dijkstra on the lifted net graph out to twice the radius.
  const double limit = 2 * radius + kTol;
  std::vector<CoverNode> nodes;
  std::map<std::pair<int, CoverGroup::Element>, int> index;
  auto intern = [&](int point, const CoverGroup::Element& e) {
    auto [it, fresh] = index.emplace(std::make_pair(point, e), static_cast<int>(nodes.size()));
    if (fresh) nodes.push_back(CoverNode{point, e, std::numeric_limits<double>::infinity(), -1});
    return it->second;
  };
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  int root = intern(engine.basepoint(), grp.identity());
  nodes[root].norm = 0.0;
  pq.push({0.0, root});
  std::vector<char> done;
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (static_cast<std::size_t>(u) < done.size() && done[u]) continue;
    if (d > nodes[u].norm) continue;
    if (done.size() < nodes.size()) done.resize(nodes.size(), 0);
    done[u] = 1;
    for (const auto& s : steps[nodes[u].point]) {
      double nd = d + s.length;
      if (nd > limit) continue;
      int v = intern(s.to, grp.multiply(nodes[u].element, s.voltage));
      if (nd < nodes[v].norm - kTol) {
        nodes[v].norm = nd;
        nodes[v].parent = u;
        pq.push({nd, v});
      }
    }
  }

  // Order by norm so the ball is a prefix.
  std::vector<int> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& x = nodes[a];
    const auto& y = nodes[b];
    if (std::fabs(x.norm - y.norm) > kTol) return x.norm < y.norm;
    if (x.point != y.point) return x.point < y.point;
    return x.element < y.element;
  });
  std::vector<int> rank(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  nodes_.reserve(nodes.size());
  for (int o : order) {
    CoverNode n = nodes[o];
    if (n.parent >= 0) n.parent = rank[n.parent];
    nodes_.push_back(std::move(n));
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_[{nodes_[i].point, nodes_[i].element}] = static_cast<int>(i);
  while (ball_size_ < nodes_.size() && nodes_[ball_size_].norm <= radius + kTol) ++ball_size_;

  std::vector<std::vector<std::pair<int, double>>> adj(nodes_.size());
  for (std::size_t u = 0; u < nodes_.size(); ++u)
    for (const auto& s : steps[nodes_[u].point]) {
      int v = find(s.to, grp.multiply(nodes_[u].element, s.voltage));
      if (v < 0) continue;
      adj[u].push_back({v, s.length});
      if (static_cast<std::size_t>(v) > u && u < ball_size_ && static_cast<std::size_t>(v) < ball_size_)
        edges_.push_back(CoverEdge{static_cast<int>(u), v, s.length});
    }

  dist_.assign(ball_size_ * ball_size_, 0.0);
  std::vector<double> dd(nodes_.size());
  for (std::size_t s = 0; s < ball_size_; ++s) {
    std::fill(dd.begin(), dd.end(), std::numeric_limits<double>::infinity());
    dd[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    q.push({0.0, static_cast<int>(s)});
    while (!q.empty()) {
      auto [d, u] = q.top();
      q.pop();
      if (d > dd[u]) continue;
      for (auto [v, len] : adj[u])
        if (d + len < dd[v] - kTol) {
          dd[v] = d + len;
          q.push({dd[v], v});
        }
    }
    for (std::size_t t = 0; t < ball_size_; ++t) dist_[s * ball_size_ + t] = dd[t];
  }
}

const GraphPoint& CoverBall::projection(std::size_t i) const { return engine_->net().point(nodes_.at(i).point); }

std::vector<int> CoverBall::path_to(std::size_t i) const {
  std::vector<int> path;
  for (int cur = static_cast<int>(i); cur >= 0; cur = nodes_[cur].parent) path.push_back(nodes_[cur].point);
  std::reverse(path.begin(), path.end());
  return path;
}

Chain CoverBall::chain_to(std::size_t i) const { return engine_->net_chain(path_to(i), eps_); }

int CoverBall::find(int point, const CoverGroup::Element& element) const {
  auto it = index_.find({point, element});
  return it == index_.end() ? -1 : it->second;
}

CoverBall cover_ball(const HomotopyEngine& engine, double eps, double radius, const KernelSpec& kernel) {
  return CoverBall(engine, eps, radius, kernel);
}

std::vector<int> deck_action(const CoverBall& ball, const Chain& loop) {
  const HomotopyEngine& engine = ball.engine();
  if (!loop.is_loop() || !(loop.points.front() == engine.net().point(engine.basepoint())))
    throw DomainError("deck action needs a loop at the basepoint");
  Chain at = loop;
  at.scale = ball.scale();
  require_valid(engine.graph(), at);
  auto h = ball.group().of_net_path(engine.snap(at).ids);
  std::vector<int> image(ball.size(), -1);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    int j = ball.find(ball.node(i).point, ball.group().multiply(h, ball.node(i).element));
    if (j >= 0 && static_cast<std::size_t>(j) < ball.size()) image[i] = j;
  }
  return image;
}

AbelianInvariants quotient_group_invariants(const CoverBall& ball) {
  const auto& g = ball.group().group();
  return AbelianInvariants{g.rank(), g.torsion()};
}

GeneratorReport lollichain_generators(const HomotopyEngine& engine, double eps, double eta, const SearchBudget& budget,
                                      unsigned threads) {
  GeneratorReport rep;
  auto pres = engine.presentation(eps);
  const auto& G = pres->group();
  rep.group_kind = G.kind();
  SpectrumOptions opt{eps, engine.graph().diameter() + eta, eta, budget, threads};
  rep.spectrum = critical_spectrum(engine, opt);
  std::vector<Word> words;
  for (auto it = rep.spectrum.entries.rbegin(); it != rep.spectrum.entries.rend(); ++it)
    for (const auto& t : it->representatives) {
      Chain l = lollichain(engine, t, eps);
      Word w = engine.word(l);
      rep.chains.push_back(l);
      rep.triads.push_back(t);
      rep.classes.push_back(pres->h1(w));
      words.push_back(w);
    }
  SimplifiedGroup q = G.quotient(words);
  rep.generates_h1 = q.invariant_factors().empty();
  rep.full_generation_certified = q.kind() == GroupKind::Trivial;
  return rep;
}

namespace {

IntMatrix with_torsion(IntMatrix rows, const std::vector<std::int64_t>& factors) {
  for (std::size_t j = 0; j < factors.size(); ++j)
    if (factors[j] != 0) {
      IntRow r(factors.size(), 0);
      r[j] = factors[j];
      rows.push_back(std::move(r));
    }
  return hermite_normal_form(std::move(rows), factors.size());
}

}  // namespace

IntMatrix theta_kernel_lattice(const HomotopyEngine& engine, double eps, double delta) {
  if (!(delta >= eps)) throw DomainError("theta needs delta >= eps");
  auto pe = engine.presentation(eps);
  auto pd = engine.presentation(delta);
  const auto& G = pe->group();
  const auto fe = G.invariant_factors();
  const auto fd = pd->group().invariant_factors();
  const int k = G.num_generators();
  const int n = static_cast<int>(engine.net().size());

  // A raw generator whose image is a single simplified letter gives a loop for it.
  std::vector<std::vector<int>> loops(k);
  std::vector<int> sign(k, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !pe->adjacent(a, b)) continue;
      Word e = pe->edge_word(a, b);
      if (e.size() != 1 || e[0] < 0) continue;
      const Word& im = G.image(e[0] - 1);
      if (im.size() != 1) continue;
      int s = std::abs(im[0]) - 1;
      if (!loops[s].empty()) continue;
      auto path = pe->tree_path_from_base(a);
      auto back = pe->tree_path_from_base(b);
      path.insert(path.end(), back.rbegin(), back.rend());
      loops[s] = path;
      sign[s] = im[0] > 0 ? 1 : -1;
    }

  // x * M gives the eps class, x * Theta the delta class of a generator combination.
  IntMatrix M, Theta;
  for (int s = 0; s < k; ++s) {
    Word letter{s + 1};
    M.push_back(G.h1(letter));
    if (loops[s].empty()) throw UnresolvedError("no net loop represents a generator at scale " + std::to_string(eps));
    auto cls = pd->group().h1(pd->group_word(loops[s]));
    if (sign[s] < 0)
      for (auto& c : cls) c = -c;
    IntRow row(fd.size(), 0);
    for (std::size_t j = 0; j < fd.size(); ++j) row[j] = cls[j];
    Theta.push_back(row);
  }
  // Torsion of the coarse group enters as extra free rows of the kernel problem.
  IntMatrix A = Theta;
  for (std::size_t j = 0; j < fd.size(); ++j)
    if (fd[j] != 0) {
      IntRow r(fd.size(), 0);
      r[j] = fd[j];
      A.push_back(std::move(r));
    }
  IntMatrix rows;
  if (fd.empty()) {
    rows = M;
  } else {
    for (const auto& x : left_kernel(A, fd.size())) {
      IntRow r(fe.size(), 0);
      for (int s = 0; s < k; ++s)
        for (std::size_t j = 0; j < fe.size(); ++j) r[j] = checked_add(r[j], checked_mul(x[s], M[s][j]));
      rows.push_back(std::move(r));
    }
  }
  return with_torsion(std::move(rows), fe);
}

IntMatrix kernel_class_lattice(const HomotopyEngine& engine, double eps, const KernelSpec& kernel) {
  auto pe = engine.presentation(eps);
  IntMatrix rows;
  for (std::size_t i = 0; i < kernel.triads.size(); ++i) {
    const std::vector<int>* anchor = i < kernel.anchors.size() ? &kernel.anchors[i] : nullptr;
    rows.push_back(pe->h1(engine.word(lollichain(engine, kernel.triads[i], eps, anchor))).coords);
  }
  return with_torsion(std::move(rows), pe->group().invariant_factors());
}

void write_ball_graph(std::ostream& out, const CoverBall& ball) {
  auto old = out.precision(12);
  for (std::size_t i = 0; i < ball.size(); ++i) out << "v " << i << "\n";
  std::size_t k = 0;
  for (const auto& e : ball.edges()) out << "e " << k++ << " " << e.a << " " << e.b << " " << e.length << "\n";
  out.precision(old);
}

}  // namespace epscov
