#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "epscov/common.hpp"

namespace epscov {

// A point is either a vertex or an interior point of an edge. The offset of
// an interior point is measured from the edge's lower-index endpoint.
struct GraphPoint {
  int vertex = -1;
  int edge = -1;
  double offset = 0.0;

  static GraphPoint at_vertex(int v) { return GraphPoint{v, -1, 0.0}; }
  bool is_vertex() const { return vertex >= 0; }
  bool operator==(const GraphPoint& o) const;
  bool operator!=(const GraphPoint& o) const { return !(*this == o); }
};

struct Edge {
  int u = 0;  // u <= v
  int v = 0;
  double length = 0.0;
};

enum class Family { Generic, Circle, TorusGrid, Wedge, Segment };

// Generator parameters, kept so that scaling maps between family members can
// be written down.
struct FamilyTag {
  Family family = Family::Generic;
  std::vector<double> params;
  int n = 0;
};

// One straight run along an edge, from offset `from` to offset `to`.
struct Segment {
  int edge = -1;
  double from = 0.0;
  double to = 0.0;
  double length() const { return from < to ? to - from : from - to; }
};

struct Path {
  GraphPoint start;
  std::vector<Segment> segments;
  double length() const;
};

// Immutable metric graph. Copies share state.
class MetricGraph {
 public:
  MetricGraph(std::vector<int> vertex_labels, std::vector<int> edge_labels,
              std::vector<Edge> edges, FamilyTag tag = {});

  int num_vertices() const;
  int num_edges() const;
  const Edge& edge(int e) const;
  int vertex_label(int v) const;
  int edge_label(int e) const;
  const FamilyTag& tag() const;
  double total_length() const;
  double diameter() const;

  GraphPoint point(int edge, double offset) const;
  void check(const GraphPoint& p) const;

  double vertex_distance(int u, int v) const;
  double distance(const GraphPoint& p, const GraphPoint& q) const;
  Path geodesic(const GraphPoint& p, const GraphPoint& q) const;
  GraphPoint midpoint(const GraphPoint& p, const GraphPoint& q) const;
  // Point at fraction t of the way along geodesic(p, q).
  GraphPoint along(const GraphPoint& p, const GraphPoint& q, double t) const;
  GraphPoint point_on(const Path& path, double s) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

MetricGraph make_circle(double a);
MetricGraph make_segment(double length);
MetricGraph make_torus_grid(double a, double b, int n);
MetricGraph make_wedge(const std::vector<double>& lengths);
MetricGraph make_hawaiian_stage(int k);
// Parses "circle:1", "torus:a,b,n", "wedge:1,2", "segment:2", "hawaiian:k".
MetricGraph make_named(const std::string& spec);

MetricGraph parse_graph(std::istream& in);
MetricGraph load_graph(const std::string& path);
void write_graph(std::ostream& out, const MetricGraph& g);

class Net {
 public:
  Net(MetricGraph g, double resolution);

  const MetricGraph& graph() const { return graph_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return points_.size(); }
  const GraphPoint& point(std::size_t i) const { return points_[i]; }
  const std::vector<GraphPoint>& points() const { return points_; }
  double distance(std::size_t i, std::size_t j) const { return dist_[i * points_.size() + j]; }
  // Consecutive net points along an edge, with their separation.
  struct Link {
    int a;
    int b;
    double length;
  };
  const std::vector<Link>& links() const { return links_; }
  int nearest(const GraphPoint& p) const;
  // Index of p if it is a net point, else -1.
  int find(const GraphPoint& p) const;
  int id_of_vertex(int v) const { return v; }
  // Sorted distinct pairwise distances.
  const std::vector<double>& distinct_distances() const { return distinct_; }

 private:
  MetricGraph graph_;
  double resolution_;
  std::vector<GraphPoint> points_;
  std::vector<std::vector<int>> edge_points_;  // per edge, net ids from u to v
  std::vector<double> dist_;
  std::vector<Link> links_;
  std::vector<double> distinct_;
};

Net build_net(const MetricGraph& g, double r);

}  // namespace epscov
