#include "epscov/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace epscov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Exit {
  int vertex;
  double cost;
  bool has_segment;
  Segment seg;
};

}  // namespace

bool GraphPoint::operator==(const GraphPoint& o) const {
  if (is_vertex() || o.is_vertex()) return vertex == o.vertex;
  return edge == o.edge && nearly_equal(offset, o.offset);
}

double Path::length() const {
  double s = 0.0;
  for (const auto& seg : segments) s += seg.length();
  return s;
}

struct MetricGraph::Impl {
  std::vector<int> vertex_labels;
  std::vector<int> edge_labels;
  std::vector<Edge> edges;
  FamilyTag tag;
  int nv = 0;
  std::vector<double> dist;    // nv x nv
  std::vector<int> pred_edge;  // edge entering column vertex on a shortest path from row vertex
  double diameter = 0.0;
  double total = 0.0;

  double d(int u, int v) const { return dist[static_cast<std::size_t>(u) * nv + v]; }
  int pred(int u, int v) const { return pred_edge[static_cast<std::size_t>(u) * nv + v]; }
};

MetricGraph::MetricGraph(std::vector<int> vertex_labels, std::vector<int> edge_labels,
                         std::vector<Edge> edges, FamilyTag tag) {
  auto impl = std::make_shared<Impl>();
  impl->nv = static_cast<int>(vertex_labels.size());
  if (impl->nv == 0) throw DomainError("graph has no vertices");
  if (edge_labels.size() != edges.size()) throw DomainError("edge label count mismatch");
  for (auto& e : edges) {
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw DomainError("edge length must be positive and finite");
    if (e.u < 0 || e.v < 0 || e.u >= impl->nv || e.v >= impl->nv)
      throw DomainError("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
    impl->total += e.length;
  }
  impl->vertex_labels = std::move(vertex_labels);
  impl->edge_labels = std::move(edge_labels);
  impl->edges = std::move(edges);
  impl->tag = std::move(tag);

  const int nv = impl->nv;
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge)
  for (int e = 0; e < static_cast<int>(impl->edges.size()); ++e) {
    const Edge& ed = impl->edges[e];
    if (ed.u == ed.v) continue;
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }
  impl->dist.assign(static_cast<std::size_t>(nv) * nv, kInf);
  impl->pred_edge.assign(static_cast<std::size_t>(nv) * nv, -1);
  using Item = std::pair<double, int>;
  for (int s = 0; s < nv; ++s) {
    double* dist = impl->dist.data() + static_cast<std::size_t>(s) * nv;
    int* pred = impl->pred_edge.data() + static_cast<std::size_t>(s) * nv;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[u]) continue;
      for (auto [w, e] : adj[u]) {
        double nd = du + impl->edges[e].length;
        if (nd < dist[w] - kTol) {
          dist[w] = nd;
          pred[w] = e;
          pq.push({nd, w});
        } else if (nearly_equal(nd, dist[w]) && e < pred[w]) {
          pred[w] = e;
        }
      }
    }
    for (int v = 0; v < nv; ++v)
      if (dist[v] == kInf) throw DomainError("graph is not connected");
  }
  impl_ = impl;

  // Diameter over vertices and edge midpoints.
  std::vector<GraphPoint> probe;
  for (int v = 0; v < nv; ++v) probe.push_back(GraphPoint::at_vertex(v));
  for (int e = 0; e < num_edges(); ++e) probe.push_back(GraphPoint{-1, e, impl->edges[e].length / 2});
  double diam = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i)
    for (std::size_t j = i + 1; j < probe.size(); ++j) diam = std::max(diam, distance(probe[i], probe[j]));
  impl->diameter = diam;
}

int MetricGraph::num_vertices() const { return impl_->nv; }
int MetricGraph::num_edges() const { return static_cast<int>(impl_->edges.size()); }
const Edge& MetricGraph::edge(int e) const { return impl_->edges.at(e); }
int MetricGraph::vertex_label(int v) const { return impl_->vertex_labels.at(v); }
int MetricGraph::edge_label(int e) const { return impl_->edge_labels.at(e); }
const FamilyTag& MetricGraph::tag() const { return impl_->tag; }
double MetricGraph::total_length() const { return impl_->total; }
double MetricGraph::diameter() const { return impl_->diameter; }

GraphPoint MetricGraph::point(int e, double offset) const {
  if (e < 0 || e >= num_edges()) throw DomainError("edge id out of range");
  const Edge& ed = impl_->edges[e];
  if (!(offset >= -kTol && offset <= ed.length + kTol)) throw DomainError("offset outside edge");
  if (offset <= kTol) return GraphPoint::at_vertex(ed.u);
  if (offset >= ed.length - kTol) return GraphPoint::at_vertex(ed.v);
  return GraphPoint{-1, e, offset};
}

void MetricGraph::check(const GraphPoint& p) const {
  if (p.is_vertex()) {
    if (p.vertex >= num_vertices()) throw DomainError("vertex not on graph");
    return;
  }
  if (p.edge < 0 || p.edge >= num_edges()) throw DomainError("point not on graph");
  const Edge& ed = impl_->edges[p.edge];
  if (!(p.offset > kTol && p.offset < ed.length - kTol)) throw DomainError("point offset not canonical");
}

double MetricGraph::vertex_distance(int u, int v) const { return impl_->d(u, v); }

namespace {

int exits(const MetricGraph& g, const GraphPoint& p, Exit out[2]) {
  if (p.is_vertex()) {
    out[0] = Exit{p.vertex, 0.0, false, {}};
    return 1;
  }
  const Edge& e = g.edge(p.edge);
  out[0] = Exit{e.u, p.offset, true, Segment{p.edge, p.offset, 0.0}};
  out[1] = Exit{e.v, e.length - p.offset, true, Segment{p.edge, p.offset, e.length}};
  return 2;
}

int entries(const MetricGraph& g, const GraphPoint& q, Exit out[2]) {
  if (q.is_vertex()) {
    out[0] = Exit{q.vertex, 0.0, false, {}};
    return 1;
  }
  const Edge& e = g.edge(q.edge);
  out[0] = Exit{e.u, q.offset, true, Segment{q.edge, 0.0, q.offset}};
  out[1] = Exit{e.v, e.length - q.offset, true, Segment{q.edge, e.length, q.offset}};
  return 2;
}

}  // namespace

double MetricGraph::distance(const GraphPoint& p, const GraphPoint& q) const {
  if (p == q) return 0.0;
  Exit a[2], b[2];
  int na = exits(*this, p, a);
  int nb = entries(*this, q, b);
  double best = kInf;
  if (!p.is_vertex() && !q.is_vertex() && p.edge == q.edge) best = std::fabs(p.offset - q.offset);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) best = std::min(best, a[i].cost + impl_->d(a[i].vertex, b[j].vertex) + b[j].cost);
  return best;
}

Path MetricGraph::geodesic(const GraphPoint& p, const GraphPoint& q) const {
  Path best_path{p, {}};
  if (p == q) return best_path;
  Exit a[2], b[2];
  int na = exits(*this, p, a);
  int nb = entries(*this, q, b);

  auto vertex_route = [&](int from, int to) {
    std::vector<Segment> segs;
    int cur = to;
    while (cur != from) {
      int e = impl_->pred(from, cur);
      const Edge& ed = impl_->edges[e];
      int prev = ed.u == cur ? ed.v : ed.u;
      segs.push_back(prev == ed.u ? Segment{e, 0.0, ed.length} : Segment{e, ed.length, 0.0});
      cur = prev;
    }
    std::reverse(segs.begin(), segs.end());
    return segs;
  };
  // Order key of a candidate: length, then (first edge, direction), forward first.
  auto key_of = [](const std::vector<Segment>& segs) {
    if (segs.empty()) return std::pair<int, int>{-1, 0};
    return std::pair<int, int>{segs.front().edge, segs.front().to > segs.front().from ? 0 : 1};
  };

  double best_len = kInf;
  std::pair<int, int> best_key{0, 0};
  auto offer = [&](double len, std::vector<Segment> segs) {
    auto key = key_of(segs);
    if (len < best_len - kTol || (len <= best_len + kTol && key < best_key)) {
      best_len = std::min(len, best_len);
      best_key = key;
      best_path.segments = std::move(segs);
    }
  };
  if (!p.is_vertex() && !q.is_vertex() && p.edge == q.edge)
    offer(std::fabs(p.offset - q.offset), {Segment{p.edge, p.offset, q.offset}});
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      double len = a[i].cost + impl_->d(a[i].vertex, b[j].vertex) + b[j].cost;
      if (len > best_len + kTol) continue;
      std::vector<Segment> segs;
      if (a[i].has_segment) segs.push_back(a[i].seg);
      auto mid = vertex_route(a[i].vertex, b[j].vertex);
      segs.insert(segs.end(), mid.begin(), mid.end());
      if (b[j].has_segment) segs.push_back(b[j].seg);
      offer(len, std::move(segs));
    }
  }
  return best_path;
}

GraphPoint MetricGraph::point_on(const Path& path, double s) const {
  GraphPoint cur = path.start;
  for (const auto& seg : path.segments) {
    double len = seg.length();
    if (s <= len + kTol) {
      double t = std::clamp(s, 0.0, len);
      double off = seg.from < seg.to ? seg.from + t : seg.from - t;
      return point(seg.edge, off);
    }
    s -= len;
    cur = point(seg.edge, seg.to);
  }
  return cur;
}

GraphPoint MetricGraph::along(const GraphPoint& p, const GraphPoint& q, double t) const {
  if (p == q) return p;
  Path path = geodesic(p, q);
  return point_on(path, t * path.length());
}

GraphPoint MetricGraph::midpoint(const GraphPoint& p, const GraphPoint& q) const { return along(p, q, 0.5); }

namespace {

std::vector<int> iota_labels(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

MetricGraph make_circle(double a) {
  require_positive(a, "circumference");
  return MetricGraph({0}, {0}, {Edge{0, 0, a}}, FamilyTag{Family::Circle, {a}, 0});
}

MetricGraph make_segment(double length) {
  require_positive(length, "segment length");
  return MetricGraph({0, 1}, {0}, {Edge{0, 1, length}}, FamilyTag{Family::Segment, {length}, 0});
}

MetricGraph make_torus_grid(double a, double b, int n) {
  require_positive(a, "torus side a");
  require_positive(b, "torus side b");
  if (n < 3) throw DomainError("torus grid needs n >= 3");
  std::vector<Edge> edges;
  double hx = 3 * a / n, hy = 3 * b / n;
  auto id = [n](int i, int j) { return ((i + n) % n) * n + (j + n) % n; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      edges.push_back(Edge{id(i, j), id(i + 1, j), hx});
      edges.push_back(Edge{id(i, j), id(i, j + 1), hy});
    }
  }
  int ne = static_cast<int>(edges.size());
  return MetricGraph(iota_labels(n * n), iota_labels(ne), std::move(edges), FamilyTag{Family::TorusGrid, {a, b}, n});
}

MetricGraph make_wedge(const std::vector<double>& lengths) {
  if (lengths.empty()) throw DomainError("wedge needs at least one loop");
  std::vector<Edge> edges;
  for (double len : lengths) {
    require_positive(len, "loop length");
    edges.push_back(Edge{0, 0, len});
  }
  int ne = static_cast<int>(edges.size());
  return MetricGraph({0}, iota_labels(ne), std::move(edges), FamilyTag{Family::Wedge, lengths, 0});
}

MetricGraph make_hawaiian_stage(int k) {
  if (k < 1) throw DomainError("hawaiian stage needs k >= 1");
  std::vector<double> lengths;
  for (int i = 0; i < k; ++i) lengths.push_back(std::ldexp(1.0, -i));
  return make_wedge(lengths);
}

MetricGraph make_named(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        args.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw DomainError("bad generator parameter '" + tok + "' in " + spec);
      }
    }
  }
  auto need = [&](std::size_t k) {
    if (args.size() != k) throw DomainError("generator " + name + " expects " + std::to_string(k) + " parameters");
  };
  if (name == "circle") {
    need(1);
    return make_circle(args[0]);
  }
  if (name == "segment") {
    need(1);
    return make_segment(args[0]);
  }
  if (name == "torus") {
    need(3);
    return make_torus_grid(args[0], args[1], static_cast<int>(std::lround(args[2])));
  }
  if (name == "wedge") return make_wedge(args);
  if (name == "hawaiian") {
    need(1);
    return make_hawaiian_stage(static_cast<int>(std::lround(args[0])));
  }
  throw DomainError("unknown generator " + name);
}

MetricGraph parse_graph(std::istream& in) {
  std::map<int, std::size_t> vertex_line;
  struct RawEdge {
    int id, a, b;
    double len;
    std::size_t line;
  };
  std::vector<RawEdge> raw;
  std::map<int, std::size_t> edge_line;
  std::string text;
  std::size_t lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    auto hash = text.find('#');
    if (hash != std::string::npos) text.resize(hash);
    std::istringstream ls(text);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "v") {
      int id;
      if (!(ls >> id)) throw ParseError(lineno, "expected 'v <id>'");
      if (vertex_line.count(id)) throw ParseError(lineno, "duplicate vertex " + std::to_string(id));
      vertex_line[id] = lineno;
    } else if (kind == "e") {
      RawEdge e{};
      if (!(ls >> e.id >> e.a >> e.b >> e.len)) throw ParseError(lineno, "expected 'e <id> <v1> <v2> <length>'");
      if (!(e.len > 0.0) || !std::isfinite(e.len)) throw ParseError(lineno, "edge length must be positive");
      if (edge_line.count(e.id)) throw ParseError(lineno, "duplicate edge " + std::to_string(e.id));
      edge_line[e.id] = lineno;
      e.line = lineno;
      raw.push_back(e);
    } else {
      throw ParseError(lineno, "unknown declaration '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing text '" + extra + "'");
  }
  if (vertex_line.empty()) throw ParseError(lineno, "graph has no vertices");
  std::map<int, int> index;
  std::vector<int> vlabels;
  for (auto& [id, line] : vertex_line) {
    index[id] = static_cast<int>(vlabels.size());
    vlabels.push_back(id);
  }
  std::vector<Edge> edges;
  std::vector<int> elabels;
  for (const auto& e : raw) {
    if (!index.count(e.a) || !index.count(e.b)) throw ParseError(e.line, "edge references unknown vertex");
    edges.push_back(Edge{index[e.a], index[e.b], e.len});
    elabels.push_back(e.id);
  }
  // Connectivity, reported at the first unreachable vertex declaration.
  std::vector<int> parent(vlabels.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e.u)] = find(e.v);
  std::size_t bad_line = 0;
  for (std::size_t v = 0; v < vlabels.size(); ++v)
    if (find(static_cast<int>(v)) != find(0)) {
      std::size_t line = vertex_line[vlabels[v]];
      if (bad_line == 0 || line < bad_line) bad_line = line;
    }
  if (bad_line) throw ParseError(bad_line, "graph is disconnected: vertex not reachable");
  return MetricGraph(std::move(vlabels), std::move(elabels), std::move(edges));
}

MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open graph file " + path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const MetricGraph& g) {
  auto old = out.precision(12);
  for (int v = 0; v < g.num_vertices(); ++v) out << "v " << g.vertex_label(v) << "\n";
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    out << "e " << g.edge_label(e) << " " << g.vertex_label(ed.u) << " " << g.vertex_label(ed.v) << " " << ed.length
        << "\n";
  }
  out.precision(old);
}

Net::Net(MetricGraph g, double resolution) : graph_(std::move(g)), resolution_(resolution) {
  if (!(resolution > 0.0)) throw DomainError("net resolution must be positive");
  for (int v = 0; v < graph_.num_vertices(); ++v) points_.push_back(GraphPoint::at_vertex(v));
  edge_points_.resize(graph_.num_edges());
  for (int e = 0; e < graph_.num_edges(); ++e) {
    const Edge& ed = graph_.edge(e);
    int k = std::max(1, static_cast<int>(std::ceil(ed.length / resolution - 1e-9)));
    auto& ids = edge_points_[e];
    ids.push_back(ed.u);
    for (int j = 1; j < k; ++j) {
      ids.push_back(static_cast<int>(points_.size()));
      points_.push_back(GraphPoint{-1, e, ed.length * j / k});
    }
    ids.push_back(ed.v);
    for (int j = 0; j < k; ++j) links_.push_back(Link{ids[j], ids[j + 1], ed.length / k});
  }
  const std::size_t n = points_.size();
  dist_.assign(n * n, 0.0);
  std::vector<double> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = graph_.distance(points_[i], points_[j]);
      dist_[i * n + j] = dist_[j * n + i] = d;
      all.push_back(d);
    }
  std::sort(all.begin(), all.end());
  for (double d : all)
    if (distinct_.empty() || d > distinct_.back() + kTol) distinct_.push_back(d);
}

int Net::nearest(const GraphPoint& p) const {
  if (p.is_vertex()) return p.vertex;
  const auto& ids = edge_points_.at(p.edge);
  int k = static_cast<int>(ids.size()) - 1;
  double step = graph_.edge(p.edge).length / k;
  int j = static_cast<int>(std::lround(p.offset / step));
  return ids[std::clamp(j, 0, k)];
}

int Net::find(const GraphPoint& p) const {
  int id = nearest(p);
  return points_[id] == p ? id : -1;
}

Net build_net(const MetricGraph& g, double r) { return Net(g, r); }

}  // namespace epscov
