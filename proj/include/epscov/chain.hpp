#pragma once

#include <cstddef>
#include <vector>

#include "epscov/metric_graph.hpp"

namespace epscov {

struct Chain {
  std::vector<GraphPoint> points;
  double scale = 0.0;

  std::size_t count() const { return points.empty() ? 0 : points.size() - 1; }  // nu
  bool is_loop() const { return !points.empty() && points.front() == points.back(); }
};

enum class MoveKind { Insert, Remove };

// Insert: `point` becomes points[index]. Remove: points[index] is dropped.
struct BasicMove {
  MoveKind kind = MoveKind::Insert;
  std::size_t index = 0;
  GraphPoint point;
};

struct Homotopy {
  Chain start;
  std::vector<BasicMove> moves;
};

bool is_valid(const MetricGraph& g, const Chain& c);
void require_valid(const MetricGraph& g, const Chain& c);
double length(const MetricGraph& g, const Chain& c);
Chain concat(const Chain& a, const Chain& b);
Chain reverse(const Chain& a);
double gap_excess(const MetricGraph& g, const Chain& c);
double deviation(const MetricGraph& g, const Chain& a, const Chain& b);

// Applies one basic move, throwing DomainError if it is not legal at c.scale.
Chain apply_move(const MetricGraph& g, const Chain& c, const BasicMove& m);
Chain replay(const MetricGraph& g, const Homotopy& h);

// The optional move log receives basic moves that take the input to the output.
Chain midpoint_refinement(const MetricGraph& g, const Chain& c, std::vector<BasicMove>* log = nullptr);
Chain refine_to_scale(const MetricGraph& g, const Chain& c, double eps, std::vector<BasicMove>* log = nullptr);
Chain normalize_count(const MetricGraph& g, const Chain& c, double L, std::vector<BasicMove>* log = nullptr);
std::size_t normal_count(double L, double eps);

// Replaces a chain by another with the same endpoints and point count when
// deviation < gap_excess / 2, logging the insert/remove pairs.
Chain close_swap(const MetricGraph& g, const Chain& a, const Chain& b, std::vector<BasicMove>* log = nullptr);

}  // namespace epscov
