#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "epscov/covers.hpp"

namespace epscov {

struct FiniteMetricSpace {
  std::size_t size = 0;
  std::vector<double> d;  // row major

  double operator()(std::size_t i, std::size_t j) const { return d[i * size + j]; }

  static FiniteMetricSpace from_matrix(const std::vector<std::vector<double>>& m);
  static FiniteMetricSpace of_net(const Net& net);
  // Net points within radius of a net point, in net order.
  static FiniteMetricSpace net_ball(const Net& net, int center, double radius, std::vector<int>* ids = nullptr);
  static FiniteMetricSpace of_ball(const CoverBall& ball);
  FiniteMetricSpace subspace(const std::vector<int>& ids) const;
};

using Correspondence = std::vector<std::pair<int, int>>;

// Largest |dX(x, x') - dY(y, y')| over pairs of the relation.
double distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Correspondence& c);
bool is_correspondence(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Correspondence& c);

// Exhaustive search, both sizes at most 8.
double gh_distance_exact(const FiniteMetricSpace& X, const FiniteMetricSpace& Y);

struct GhBounds {
  double lower = 0.0;
  double upper = 0.0;
  Correspondence correspondence;  // realizes the upper bound
};

// Lower bound from distance values; upper bound from a farthest-first greedy
// correspondence seeded with the anchor pairs (default: point 0 to point 0).
GhBounds gh_bounds(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, Correspondence anchors = {{0, 0}});
// Same lower bound, upper bound from a supplied correspondence.
GhBounds gh_bounds_from(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, Correspondence c);
double gh_lower_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y);

struct DistortionPolynomial {
  double m = 0.0;
  double b = 0.0;
  double operator()(double t) const { return m * t + b; }
  static DistortionPolynomial of(double sigma, double eps);
};

class SigmaIsometry {
 public:
  using Map = std::function<GraphPoint(const GraphPoint&)>;
  SigmaIsometry(const Net& source, MetricGraph target, Map f, bool invertible);

  const MetricGraph& source() const { return source_; }
  const MetricGraph& target() const { return target_; }
  GraphPoint operator()(const GraphPoint& p) const { return f_(p); }
  const std::vector<GraphPoint>& table() const { return table_; }  // images of the source net
  double m() const { return m_; }
  double b() const { return b_; }
  // Largest |d - d'| on net pairs.
  double sigma() const { return sigma_; }
  bool preserves_basepoint() const;

 private:
  MetricGraph source_;
  MetricGraph target_;
  Map f_;
  std::vector<GraphPoint> table_;
  double m_ = 0.0, b_ = 0.0, sigma_ = 0.0;
};

// Parameter-proportional map between members of one family with the same
// combinatorics: each edge is stretched linearly onto its counterpart.
SigmaIsometry scaling_sigma_isometry(const Net& source, const MetricGraph& target);

Chain induced_map(const SigmaIsometry& f, const Chain& chain, double eps);

// f_# on cover ball nodes. Images outside the target ball fall back to the
// nearest ancestor whose image is inside; -1 only if none is. `exact` marks
// nodes whose own image landed in the ball.
std::vector<int> induced_node_map(const SigmaIsometry& f, const CoverBall& source, const CoverBall& target,
                                  std::vector<char>* exact = nullptr);

struct PCheckReport {
  double sigma = 0.0;
  double omega0 = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  DistortionPolynomial p;
  double max_excess = 0.0;  // max over pairs of |d - d'| - p(d), <= 0 when the bound holds
  double max_ratio = 0.0;   // max |d - d'| / p(d)
  std::size_t pairs = 0;
  std::size_t skipped = 0;  // pairs with an image outside the target ball
  bool ok = false;
};

// Refuses with DomainError naming the first failed premise.
PCheckReport check_p_isometry(const SigmaIsometry& f, const HomotopyEngine& source, const HomotopyEngine& target,
                              double omega0, double delta, double eps, double radius, const SearchBudget& budget = {},
                              std::size_t max_pairs = 200000);

// delta balancing eps - delta against (delta - omega0) / 4.
inline double balanced_delta(double omega0, double eps) { return (4 * eps + omega0) / 5; }

struct ExperimentConfig {
  std::string family = "torus";  // torus | circle | constant
  std::vector<int> indices{2, 4, 8};
  double eps = 1.0 / 3;
  double radius = 1.0;
  double resolution = 0.0;  // 0 picks the family default
  double tau = 0.35;        // circle: scale of the limit comparison
  double eta = 0.02;
  int grid = 12;
  unsigned threads = 0;
  SearchBudget budget;
};

struct ExperimentRow {
  int index = 0;
  double gh_lower = 0.0;
  double gh_upper = 0.0;
  double sigma = 0.0;
  double resolution = 0.0;
  std::size_t ball_size = 0;
  AbelianInvariants deck;
  // circle family
  double own_ball_upper = std::numeric_limits<double>::quiet_NaN();
  double line_lower = std::numeric_limits<double>::quiet_NaN();
  bool p_checked = false;
  PCheckReport p;
  std::string note;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  AbelianInvariants limit_deck;
  std::size_t limit_ball_size = 0;
  double limit_resolution = 0.0;
  std::vector<Triad> limit_triads;
};

ExperimentReport run_convergence_experiment(const ExperimentConfig& config);

struct HawaiianStage {
  int k = 0;
  int valency = 0;
  std::size_t generators = 0;
  double shortest_loop = 0.0;
  bool generation_certified = false;
};

// Stages 1..k at one scale: basepoint valency grows while loops shorter than
// 3 eps stop contributing generators.
std::vector<HawaiianStage> hawaiian_demo(int k, double eps, double resolution, unsigned threads = 0);

}  // namespace epscov
