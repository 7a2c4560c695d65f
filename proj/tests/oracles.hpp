#pragma once

// Independent reference computations used by the tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "epscov/metric_graph.hpp"

namespace oracle {

// Shortest-path distance between two points computed by splitting their edges
// at the query offsets and running a plain O(n^2) Dijkstra.
inline double subdivided_distance(const epscov::MetricGraph& g, const epscov::GraphPoint& p,
                                  const epscov::GraphPoint& q) {
  int nv = g.num_vertices();
  std::vector<epscov::GraphPoint> extra{p, q};
  std::vector<int> node_of(2);
  int n = nv;
  for (int k = 0; k < 2; ++k) node_of[k] = extra[k].is_vertex() ? extra[k].vertex : n++;
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  auto link = [&](int a, int b, double w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edge(e);
    std::vector<std::pair<double, int>> cuts{{0.0, ed.u}, {ed.length, ed.v}};
    for (int k = 0; k < 2; ++k)
      if (!extra[k].is_vertex() && extra[k].edge == e) cuts.push_back({extra[k].offset, node_of[k]});
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) link(cuts[i].second, cuts[i + 1].second, cuts[i + 1].first - cuts[i].first);
  }
  std::vector<double> d(n, std::numeric_limits<double>::infinity());
  std::vector<bool> done(n, false);
  d[node_of[0]] = 0;
  for (int it = 0; it < n; ++it) {
    int u = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && (u < 0 || d[i] < d[u])) u = i;
    done[u] = true;
    for (auto [w, len] : adj[u]) d[w] = std::min(d[w], d[u] + len);
  }
  return d[node_of[1]];
}

inline double circle_distance(double a, double s, double t) {
  double x = std::fabs(s - t);
  return std::min(x, a - x);
}

}  // namespace oracle
