#include "epscov/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace epscov {

bool H1Class::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](std::int64_t v) { return v == 0; });
}

H1Class H1Class::negated() const {
  H1Class h = *this;
  for (std::size_t i = 0; i < h.coords.size(); ++i) {
    std::int64_t d = i < factors.size() ? factors[i] : 0;
    h.coords[i] = d > 1 ? (d - h.coords[i] % d) % d : -h.coords[i];
  }
  return h;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Null:
      return "null";
    case VerdictKind::NotNull:
      return "not_null";
    case VerdictKind::Unknown:
      return "unknown";
  }
  return "?";
}

Presentation::Presentation(std::shared_ptr<const Net> net, double eps, int basepoint)
    : net_(std::move(net)), eps_(eps), basepoint_(basepoint) {
  const int n = static_cast<int>(net_->size());
  if (basepoint < 0 || basepoint >= n) throw DomainError("basepoint is not a net point");
  if (!(eps > 0.0)) throw DomainError("scale must be positive");
  std::vector<std::vector<int>> nbr(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && strictly_less(net_->distance(i, j), eps)) nbr[i].push_back(j);

  parent_.assign(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<int> queue{basepoint};
  seen[basepoint] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (int w : nbr[queue[h]])
      if (!seen[w]) {
        seen[w] = 1;
        parent_[w] = queue[h];
        queue.push_back(w);
      }
  if (static_cast<int>(queue.size()) != n)
    throw DomainError("Rips graph on the net is disconnected at scale " + std::to_string(eps));

  gen_.assign(static_cast<std::size_t>(n) * n, 0);
  std::vector<char> tree(static_cast<std::size_t>(n) * n, 0);
  for (int v = 0; v < n; ++v)
    if (parent_[v] >= 0) {
      tree[static_cast<std::size_t>(v) * n + parent_[v]] = 1;
      tree[static_cast<std::size_t>(parent_[v]) * n + v] = 1;
    }
  int gid = 0;
  for (int i = 0; i < n; ++i)
    for (int j : nbr[i]) {
      if (j <= i) continue;
      ++num_edges_;
      if (tree[static_cast<std::size_t>(i) * n + j]) continue;
      ++gid;
      gen_[static_cast<std::size_t>(i) * n + j] = gid;
      gen_[static_cast<std::size_t>(j) * n + i] = -gid;
    }
  num_generators_ = gid;

  int w[3];
  for (int i = 0; i < n; ++i)
    for (int j : nbr[i]) {
      if (j <= i) continue;
      for (int k : nbr[j]) {
        if (k <= j || !strictly_less(net_->distance(i, k), eps)) continue;
        int len = 0;
        for (int x : {gen_[static_cast<std::size_t>(i) * n + j], gen_[static_cast<std::size_t>(j) * n + k],
                      gen_[static_cast<std::size_t>(k) * n + i]})
          if (x != 0) w[len++] = x;
        relators_.push(w, w + len);
      }
    }
  group_ = SimplifiedGroup::simplify(num_generators_, relators_);
}

Word Presentation::edge_word(int a, int b) const {
  if (a == b) return {};
  if (!adjacent(a, b))
    throw DomainError("net points " + std::to_string(a) + " and " + std::to_string(b) + " are not Rips-adjacent");
  int x = gen_[static_cast<std::size_t>(a) * net_->size() + b];
  if (x == 0) return {};
  return {x};
}

Word Presentation::path_word(const std::vector<int>& ids) const {
  Word w;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    Word e = edge_word(ids[i], ids[i + 1]);
    w.insert(w.end(), e.begin(), e.end());
  }
  return free_reduce(w);
}

H1Class Presentation::h1(const Word& simplified) const {
  return H1Class{group_.h1(simplified), group_.invariant_factors()};
}

std::vector<int> Presentation::tree_path_from_base(int v) const {
  std::vector<int> path;
  for (int cur = v; cur >= 0; cur = parent_[cur]) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

HomotopyEngine::HomotopyEngine(const MetricGraph& g, double resolution, int basepoint)
    : HomotopyEngine(Net(g, resolution), basepoint) {}

HomotopyEngine::HomotopyEngine(Net net, int basepoint)
    : net_(std::make_shared<const Net>(std::move(net))), basepoint_(basepoint) {
  if (basepoint < 0 || static_cast<std::size_t>(basepoint) >= net_->size())
    throw DomainError("basepoint is not a net point");
}

std::shared_ptr<const Presentation> HomotopyEngine::presentation(double eps) const {
  const auto& dd = net_->distinct_distances();
  auto key = static_cast<std::size_t>(std::lower_bound(dd.begin(), dd.end(), eps - kTol) - dd.begin());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto p = std::make_shared<const Presentation>(net_, eps, basepoint_);
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(key, p).first->second;
}

SnappedChain HomotopyEngine::snap(const Chain& c) const {
  SnappedChain s;
  for (const auto& p : c.points) {
    int id = net_->nearest(p);
    s.ids.push_back(id);
    s.max_shift = std::max(s.max_shift, graph().distance(p, net_->point(id)));
  }
  if (s.max_shift > kTol) {
    double E = gap_excess(graph(), c);
    if (!(s.max_shift < E / 2 - kTol))
      throw DomainError("snapping to the net moves a point by " + std::to_string(s.max_shift) +
                        ", not below half the gap excess " + std::to_string(E / 2));
  }
  return s;
}

Chain HomotopyEngine::net_chain(const std::vector<int>& ids, double eps) const {
  Chain c{{}, eps};
  for (int id : ids) c.points.push_back(net_->point(id));
  return c;
}

Chain HomotopyEngine::snappable(const Chain& c, std::vector<BasicMove>* log) const {
  double shift = 0.0;
  for (const auto& p : c.points) shift = std::max(shift, graph().distance(p, net_->point(net_->nearest(p))));
  if (shift <= kTol || shift < gap_excess(graph(), c) / 2 - kTol) return c;
  // Halving every gap leaves an excess of at least eps / 2.
  return midpoint_refinement(graph(), c, log);
}

Word HomotopyEngine::word(const Chain& c) const {
  auto pres = presentation(c.scale);
  return pres->group_word(snap(snappable(c)).ids);
}

H1Class HomotopyEngine::h1_class(const Chain& loop) const {
  if (!loop.is_loop()) throw DomainError("h1_class needs a loop");
  auto pres = presentation(loop.scale);
  return pres->h1(pres->group_word(snap(snappable(loop)).ids));
}

std::size_t HomotopyEngine::default_max_points(double eps) const {
  return 4 * static_cast<std::size_t>(std::floor(2.0 * graph().diameter() / eps + 1.0));
}

namespace {

struct PackedMove {
  MoveKind kind;
  std::uint32_t index;
  int point;
};

class MoveSearch {
 public:
  MoveSearch(const Net& net, double eps, std::size_t max_points, std::size_t max_states)
      : net_(net), eps_(eps), max_points_(max_points), max_states_(max_states), slack_(2 * net.resolution() + kTol) {}

  // Returns true with moves (inner indices) reducing ids to a single point.
  bool run(const std::vector<int>& start, std::vector<PackedMove>& out, std::size_t& visited) {
    std::vector<int> s = start;
    std::vector<PackedMove> first;
    reduce(s, first);
    std::size_t root = add_node(-1, s, first);
    visited_.insert(root);
    push(root);
    while (!open_.empty()) {
      auto [len, n, idx] = open_.top();
      open_.pop();
      (void)len;
      (void)n;
      std::vector<int> cur(ids_.begin() + nodes_[idx].ids_off,
                           ids_.begin() + nodes_[idx].ids_off + nodes_[idx].ids_len);
      if (cur.size() == 1) {
        reconstruct(idx, out);
        visited = nodes_.size();
        return true;
      }
      if (nodes_.size() >= max_states_) break;
      expand(idx, cur);
    }
    visited = nodes_.size();
    return false;
  }

 private:
  struct Node {
    int parent;
    std::size_t ids_off, ids_len, moves_off, moves_len;
  };
  struct NodeHash {
    const MoveSearch* s;
    std::size_t operator()(std::size_t i) const {
      std::size_t h = 1469598103934665603ull;
      const auto& nd = s->nodes_[i];
      for (std::size_t k = 0; k < nd.ids_len; ++k) {
        h ^= static_cast<std::size_t>(s->ids_[nd.ids_off + k]) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
      }
      return h;
    }
  };
  struct NodeEq {
    const MoveSearch* s;
    bool operator()(std::size_t a, std::size_t b) const {
      const auto& x = s->nodes_[a];
      const auto& y = s->nodes_[b];
      return x.ids_len == y.ids_len &&
             std::equal(s->ids_.begin() + x.ids_off, s->ids_.begin() + x.ids_off + x.ids_len, s->ids_.begin() + y.ids_off);
    }
  };
  using Entry = std::tuple<double, std::size_t, std::size_t>;

  const Net& net_;
  double eps_;
  std::size_t max_points_, max_states_;
  double slack_;
  std::vector<Node> nodes_;
  std::vector<int> ids_;
  std::vector<PackedMove> moves_;
  std::unordered_set<std::size_t, NodeHash, NodeEq> visited_{16, NodeHash{this}, NodeEq{this}};
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open_;
  std::unordered_map<std::uint64_t, int> target_cache_;

  bool close(int a, int b) const { return a == b || strictly_less(net_.distance(a, b), eps_); }

  double chain_length(const std::vector<int>& s) const {
    double L = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) L += net_.distance(s[i], s[i + 1]);
    return L;
  }

  // Net point at fraction code/4 along the geodesic from a to b.
  int target(int a, int b, int code) {
    std::uint64_t key = (static_cast<std::uint64_t>(a) * net_.size() + static_cast<std::uint64_t>(b)) * 4 + code;
    auto it = target_cache_.find(key);
    if (it != target_cache_.end()) return it->second;
    const auto& g = net_.graph();
    int id = net_.nearest(g.along(net_.point(a), net_.point(b), code / 4.0));
    target_cache_.emplace(key, id);
    return id;
  }

  // Removes duplicates and points whose removal shortens the chain by more
  // than the snapping slack.
  void reduce(std::vector<int>& s, std::vector<PackedMove>& log) const {
    std::size_t i = 1;
    while (i < s.size()) {
      std::size_t last = s.size() - 1;
      bool remove = false;
      if (i < last) {
        if (s[i] == s[i - 1] || s[i] == s[i + 1]) {
          remove = close(s[i - 1], s[i + 1]);
        } else if (close(s[i - 1], s[i + 1])) {
          double gain = net_.distance(s[i - 1], s[i]) + net_.distance(s[i], s[i + 1]) - net_.distance(s[i - 1], s[i + 1]);
          remove = gain > slack_;
        }
      } else {
        remove = s[i] == s[i - 1];
      }
      if (remove) {
        log.push_back(PackedMove{MoveKind::Remove, static_cast<std::uint32_t>(i), s[i]});
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
        i = std::max<std::size_t>(1, i - 1);
      } else {
        ++i;
      }
    }
  }

  std::size_t add_node(int parent, const std::vector<int>& s, const std::vector<PackedMove>& mv) {
    Node nd{parent, ids_.size(), s.size(), moves_.size(), mv.size()};
    ids_.insert(ids_.end(), s.begin(), s.end());
    moves_.insert(moves_.end(), mv.begin(), mv.end());
    nodes_.push_back(nd);
    return nodes_.size() - 1;
  }

  void push(std::size_t idx) {
    std::vector<int> s(ids_.begin() + nodes_[idx].ids_off, ids_.begin() + nodes_[idx].ids_off + nodes_[idx].ids_len);
    double L = std::round(chain_length(s) / kTol) * kTol;
    open_.emplace(L, s.size(), idx);
  }

  void offer(std::size_t parent, std::vector<int> s, std::vector<PackedMove> mv) {
    reduce(s, mv);
    std::size_t idx = add_node(static_cast<int>(parent), s, mv);
    if (!visited_.insert(idx).second) {
      nodes_.pop_back();
      ids_.resize(ids_.size() - s.size());
      moves_.resize(moves_.size() - mv.size());
      return;
    }
    push(idx);
  }

  void expand(std::size_t idx, const std::vector<int>& s) {
    const std::size_t last = s.size() - 1;
    // Removals.
    for (std::size_t i = 1; i < last; ++i) {
      if (!close(s[i - 1], s[i + 1])) continue;
      std::vector<int> t = s;
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
      offer(idx, std::move(t), {PackedMove{MoveKind::Remove, static_cast<std::uint32_t>(i), s[i]}});
    }
    // Slides: insert a nearby point after s[i], then drop s[i].
    for (std::size_t i = 1; i < last; ++i) {
      int a = s[i - 1], x = s[i], b = s[i + 1];
      int cands[7] = {target(a, b, 2), target(x, b, 1), target(x, b, 2), target(x, b, 3),
                      target(x, a, 1), target(x, a, 2), target(x, a, 3)};
      for (int k = 0; k < 7; ++k) {
        int p = cands[k];
        if (p == x || std::find(cands, cands + k, p) != cands + k) continue;
        if (!close(x, p) || !close(p, b) || !close(a, p)) continue;
        std::vector<int> t = s;
        t[i] = p;
        offer(idx, std::move(t),
              {PackedMove{MoveKind::Insert, static_cast<std::uint32_t>(i + 1), p},
               PackedMove{MoveKind::Remove, static_cast<std::uint32_t>(i), x}});
      }
    }
    // Insertions of midpoints.
    if (s.size() + 1 <= max_points_) {
      for (std::size_t i = 0; i < last; ++i) {
        int a = s[i], b = s[i + 1];
        if (a == b) continue;
        int m = target(a, b, 2);
        if (m == a || m == b || !close(a, m) || !close(m, b)) continue;
        std::vector<int> t = s;
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(i + 1), m);
        offer(idx, std::move(t), {PackedMove{MoveKind::Insert, static_cast<std::uint32_t>(i + 1), m}});
      }
    }
  }

  void reconstruct(std::size_t idx, std::vector<PackedMove>& out) const {
    std::vector<std::size_t> chain;
    for (long cur = static_cast<long>(idx); cur >= 0; cur = nodes_[cur].parent) chain.push_back(static_cast<std::size_t>(cur));
    std::reverse(chain.begin(), chain.end());
    for (std::size_t c : chain) {
      const Node& nd = nodes_[c];
      out.insert(out.end(), moves_.begin() + static_cast<std::ptrdiff_t>(nd.moves_off),
                 moves_.begin() + static_cast<std::ptrdiff_t>(nd.moves_off + nd.moves_len));
    }
  }
};

}  // namespace

Verdict HomotopyEngine::is_null(const Chain& input, const SearchBudget& budget) const {
  const MetricGraph& g = graph();
  require_valid(g, input);
  if (!input.is_loop()) throw DomainError("is_null needs a loop");
  std::vector<BasicMove> moves;
  const Chain loop = snappable(input, &moves);
  Verdict v;
  auto pres = presentation(loop.scale);
  SnappedChain snapped = snap(loop);
  Word w = pres->group_word(snapped.ids);
  v.certificate = pres->h1(w);
  if (!v.certificate.is_zero()) {
    v.kind = VerdictKind::NotNull;
    v.note = "nonzero H1 class";
    return v;
  }
  if (pres->group().kind() == GroupKind::Free && !w.empty()) {
    v.kind = VerdictKind::NotNull;
    v.word_certificate = w;
    v.note = "nontrivial reduced word in a free group";
    return v;
  }

  // Move the loop onto the net, search there, then release the endpoints.
  v.witness.start = input;
  Chain cur = loop;
  std::size_t offset = 0;
  bool all_net = snapped.max_shift <= kTol;
  bool endpoint_off_net = !(net_->point(snapped.ids.front()) == loop.points.front());
  if (!all_net) {
    if (endpoint_off_net) {
      moves.push_back(BasicMove{MoveKind::Insert, 1, loop.points.front()});
      moves.push_back(BasicMove{MoveKind::Insert, loop.points.size(), loop.points.back()});
      for (std::size_t i = moves.size() - 2; i < moves.size(); ++i) cur = apply_move(g, cur, moves[i]);
      offset = 1;
    }
    Chain target = cur;
    for (std::size_t i = 0; i < snapped.ids.size(); ++i) target.points[i + offset] = net_->point(snapped.ids[i]);
    cur = close_swap(g, cur, target, &moves);
  }

  std::size_t max_points = budget.max_points ? budget.max_points : default_max_points(loop.scale);
  max_points = std::max(max_points, snapped.ids.size() + 2);
  MoveSearch search(*net_, loop.scale, max_points, budget.max_states);
  std::vector<PackedMove> inner;
  bool found = search.run(snapped.ids, inner, v.states);
  if (!found) {
    v.kind = VerdictKind::Unknown;
    v.note = v.states >= budget.max_states ? "state budget exhausted" : "search space exhausted under point cap";
    return v;
  }
  for (const auto& m : inner)
    moves.push_back(BasicMove{m.kind, m.index + offset, net_->point(static_cast<std::size_t>(m.point))});
  if (offset) {
    moves.push_back(BasicMove{MoveKind::Remove, 1, net_->point(snapped.ids.front())});
    moves.push_back(BasicMove{MoveKind::Remove, 1, loop.points.back()});
  }
  v.witness.moves = std::move(moves);
  v.kind = VerdictKind::Null;
  v.note = "basic-move witness";
  return v;
}

bool HomotopyEngine::audit(const Chain& loop, const Verdict& v) const {
  try {
    switch (v.kind) {
      case VerdictKind::Null: {
        if (v.witness.start.points != loop.points) return false;
        Chain end = replay(graph(), v.witness);
        return end.points.size() == 1 && end.points[0] == loop.points.front();
      }
      case VerdictKind::NotNull: {
        auto pres = presentation(loop.scale);
        Word w = pres->group_word(snap(snappable(loop)).ids);
        if (!v.word_certificate.empty())
          return pres->group().kind() == GroupKind::Free && w == v.word_certificate;
        H1Class h = pres->h1(w);
        return !h.is_zero() && h == v.certificate;
      }
      case VerdictKind::Unknown:
        return true;
    }
  } catch (const DomainError&) {
    return false;
  }
  return false;
}

H1Class h1_class(const HomotopyEngine& engine, const Chain& loop) { return engine.h1_class(loop); }

Verdict is_null(const HomotopyEngine& engine, const Chain& loop, const SearchBudget& budget) {
  return engine.is_null(loop, budget);
}

Chain theta(const MetricGraph& g, const Chain& loop, double delta) {
  require_valid(g, loop);
  if (delta < loop.scale - kTol) throw DomainError("theta needs delta >= eps");
  Chain c = loop;
  c.scale = delta;
  return c;
}

}  // namespace epscov
