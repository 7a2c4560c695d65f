#include "epscov/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epscov {

bool is_valid(const MetricGraph& g, const Chain& c) {
  if (c.points.empty() || !(c.scale > 0.0)) return false;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
    if (!strictly_less(g.distance(c.points[i], c.points[i + 1]), c.scale)) return false;
  return true;
}

void require_valid(const MetricGraph& g, const Chain& c) {
  if (c.points.empty()) throw DomainError("chain has no points");
  if (!(c.scale > 0.0)) throw DomainError("chain scale must be positive");
  for (const auto& p : c.points) g.check(p);
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    double d = g.distance(c.points[i], c.points[i + 1]);
    if (!strictly_less(d, c.scale))
      throw DomainError("gap " + std::to_string(i) + " of length " + std::to_string(d) + " is not below scale " +
                        std::to_string(c.scale));
  }
}

double length(const MetricGraph& g, const Chain& c) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) s += g.distance(c.points[i], c.points[i + 1]);
  return s;
}

Chain concat(const Chain& a, const Chain& b) {
  if (a.points.empty() || b.points.empty()) throw DomainError("cannot concatenate empty chains");
  if (!(a.points.back() == b.points.front())) throw DomainError("concatenation endpoint mismatch");
  if (!nearly_equal(a.scale, b.scale)) throw DomainError("concatenation scale mismatch");
  Chain c = a;
  c.points.insert(c.points.end(), b.points.begin() + 1, b.points.end());
  return c;
}

Chain reverse(const Chain& a) {
  Chain c = a;
  std::reverse(c.points.begin(), c.points.end());
  return c;
}

double gap_excess(const MetricGraph& g, const Chain& c) {
  double e = c.scale;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) e = std::min(e, c.scale - g.distance(c.points[i], c.points[i + 1]));
  return e;
}

double deviation(const MetricGraph& g, const Chain& a, const Chain& b) {
  if (a.points.size() != b.points.size()) throw DomainError("deviation needs chains with equal point counts");
  double d = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i) d = std::max(d, g.distance(a.points[i], b.points[i]));
  return d;
}

Chain apply_move(const MetricGraph& g, const Chain& c, const BasicMove& m) {
  const auto& pts = c.points;
  Chain out{{}, c.scale};
  if (m.kind == MoveKind::Insert) {
    if (m.index > pts.size()) throw DomainError("insert index out of range");
    if (m.index == 0 && !(m.point == pts.front())) throw DomainError("insert would move the first endpoint");
    if (m.index == pts.size() && !(m.point == pts.back())) throw DomainError("insert would move the last endpoint");
    if (m.index > 0 && !strictly_less(g.distance(pts[m.index - 1], m.point), c.scale))
      throw DomainError("inserted point too far from its predecessor");
    if (m.index < pts.size() && !strictly_less(g.distance(m.point, pts[m.index]), c.scale))
      throw DomainError("inserted point too far from its successor");
    out.points.reserve(pts.size() + 1);
    out.points.insert(out.points.end(), pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(m.index));
    out.points.push_back(m.point);
    out.points.insert(out.points.end(), pts.begin() + static_cast<std::ptrdiff_t>(m.index), pts.end());
    return out;
  }
  if (m.index >= pts.size() || pts.size() < 2) throw DomainError("remove index out of range");
  if (m.index == 0 && !(pts[1] == pts[0])) throw DomainError("remove would move the first endpoint");
  if (m.index + 1 == pts.size() && !(pts[m.index - 1] == pts[m.index]))
    throw DomainError("remove would move the last endpoint");
  if (m.index > 0 && m.index + 1 < pts.size() &&
      !strictly_less(g.distance(pts[m.index - 1], pts[m.index + 1]), c.scale))
    throw DomainError("removal leaves a gap at or above scale");
  out.points = pts;
  out.points.erase(out.points.begin() + static_cast<std::ptrdiff_t>(m.index));
  return out;
}

Chain replay(const MetricGraph& g, const Homotopy& h) {
  require_valid(g, h.start);
  Chain c = h.start;
  for (const auto& m : h.moves) c = apply_move(g, c, m);
  return c;
}

namespace {

void record(std::vector<BasicMove>* log, MoveKind kind, std::size_t index, const GraphPoint& p) {
  if (log) log->push_back(BasicMove{kind, index, p});
}

}  // namespace

Chain midpoint_refinement(const MetricGraph& g, const Chain& c, std::vector<BasicMove>* log) {
  Chain out{{}, c.scale};
  if (c.points.empty()) return out;
  out.points.push_back(c.points[0]);
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    GraphPoint m = g.midpoint(c.points[i], c.points[i + 1]);
    record(log, MoveKind::Insert, out.points.size(), m);
    out.points.push_back(m);
    out.points.push_back(c.points[i + 1]);
  }
  return out;
}

Chain refine_to_scale(const MetricGraph& g, const Chain& c, double eps, std::vector<BasicMove>* log) {
  if (!(eps > 0.0)) throw DomainError("refinement scale must be positive");
  if (eps > c.scale + kTol) throw DomainError("refinement scale exceeds chain scale");
  Chain out{{}, eps};
  if (c.points.empty()) return out;
  out.points.push_back(c.points[0]);
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    const GraphPoint& a = c.points[i];
    const GraphPoint& b = c.points[i + 1];
    double d = g.distance(a, b);
    auto k = static_cast<std::size_t>(std::floor(d / (eps - kTol))) + 1;
    if (k > 1) {
      Path path = g.geodesic(a, b);
      for (std::size_t j = 1; j < k; ++j) {
        GraphPoint p = g.point_on(path, path.length() * static_cast<double>(j) / static_cast<double>(k));
        record(log, MoveKind::Insert, out.points.size(), p);
        out.points.push_back(p);
      }
    }
    out.points.push_back(b);
  }
  return out;
}

std::size_t normal_count(double L, double eps) {
  return static_cast<std::size_t>(std::floor(2.0 * L / eps + 1.0));
}

Chain normalize_count(const MetricGraph& g, const Chain& c, double L, std::vector<BasicMove>* log) {
  double len = length(g, c);
  if (len > L + kTol) throw DomainError("chain is longer than the normalization bound");
  std::size_t target = normal_count(L, c.scale);
  Chain cur = c;
  while (cur.count() < target) {
    BasicMove m{MoveKind::Insert, cur.points.size() - 1, cur.points.back()};
    cur = apply_move(g, cur, m);
    if (log) log->push_back(m);
  }
  while (cur.count() > target) {
    const auto& pts = cur.points;
    std::size_t best = 1;
    double best_sum = 0.0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      double s = g.distance(pts[i - 1], pts[i]) + g.distance(pts[i], pts[i + 1]);
      if (i == 1 || s < best_sum) {
        best_sum = s;
        best = i;
      }
    }
    BasicMove m{MoveKind::Remove, best, pts[best]};
    cur = apply_move(g, cur, m);
    if (log) log->push_back(m);
  }
  return cur;
}

Chain close_swap(const MetricGraph& g, const Chain& a, const Chain& b, std::vector<BasicMove>* log) {
  if (a.points.size() != b.points.size()) throw DomainError("close_swap needs equal point counts");
  if (!(a.points.front() == b.points.front()) || !(a.points.back() == b.points.back()))
    throw DomainError("close_swap needs equal endpoints");
  if (!(deviation(g, a, b) < gap_excess(g, a) / 2 - kTol))
    throw DomainError("deviation is not below half the gap excess");
  Chain cur = a;
  for (std::size_t i = 1; i + 1 < a.points.size(); ++i) {
    if (cur.points[i] == b.points[i]) continue;
    BasicMove ins{MoveKind::Insert, i + 1, b.points[i]};
    cur = apply_move(g, cur, ins);
    BasicMove rem{MoveKind::Remove, i, cur.points[i]};
    cur = apply_move(g, cur, rem);
    if (log) {
      log->push_back(ins);
      log->push_back(rem);
    }
  }
  return cur;
}

}  // namespace epscov
