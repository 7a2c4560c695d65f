#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "epscov/spectrum.hpp"

namespace epscov {

struct KernelSpec {
  std::vector<Triad> triads;
  // Optional net paths from the basepoint to each triad's first point.
  std::vector<std::vector<int>> anchors;
};

// anchor * refined triad loop * reversed anchor, as a loop at the basepoint.
Chain lollichain(const HomotopyEngine& engine, const Triad& t, double eps, const std::vector<int>* anchor = nullptr);

// Quotient of pi_eps by the normal closure of the kernel lollichains.
class CoverGroup {
 public:
  CoverGroup(const HomotopyEngine& engine, double eps, const KernelSpec& kernel);

  const SimplifiedGroup& group() const { return group_; }
  const Presentation& presentation() const { return *pres_; }
  double scale() const { return eps_; }
  const std::vector<Chain>& kernel_loops() const { return kernel_loops_; }

  using Element = std::vector<std::int64_t>;
  Element identity() const { return abelian_ ? Element(group_.invariant_factors().size(), 0) : Element{}; }
  Element multiply(const Element& a, const Element& b) const;
  Element invert(const Element& a) const;
  Element of_raw(const Word& raw) const;
  Element of_net_path(const std::vector<int>& ids) const { return of_raw(pres_->path_word(ids)); }

 private:
  std::shared_ptr<const Presentation> pres_;
  double eps_;
  SimplifiedGroup group_;
  std::vector<Chain> kernel_loops_;
  bool abelian_ = false;
};

struct CoverNode {
  int point = 0;  // net id of the projection
  CoverGroup::Element element;
  double norm = 0.0;
  int parent = -1;
};

struct CoverEdge {
  int a;
  int b;
  double length;
};

class CoverBall {
 public:
  CoverBall(const HomotopyEngine& engine, double eps, double radius, const KernelSpec& kernel = {});

  double scale() const { return eps_; }
  double radius() const { return radius_; }
  const KernelSpec& kernel() const { return kernel_; }
  const CoverGroup& group() const { return *group_; }
  const HomotopyEngine& engine() const { return *engine_; }

  std::size_t size() const { return ball_size_; }
  std::size_t explored() const { return nodes_.size(); }
  const CoverNode& node(std::size_t i) const { return nodes_[i]; }
  const GraphPoint& projection(std::size_t i) const;
  double distance(std::size_t i, std::size_t j) const { return dist_[i * ball_size_ + j]; }
  const std::vector<CoverEdge>& edges() const { return edges_; }
  // Net path from the basepoint realizing the node's norm.
  std::vector<int> path_to(std::size_t i) const;
  Chain chain_to(std::size_t i) const;
  // Explored node index with this projection and element, or -1.
  int find(int point, const CoverGroup::Element& element) const;

 private:
  const HomotopyEngine* engine_;
  double eps_;
  double radius_;
  KernelSpec kernel_;
  std::shared_ptr<const CoverGroup> group_;
  std::vector<CoverNode> nodes_;
  std::size_t ball_size_ = 0;
  std::vector<CoverEdge> edges_;
  std::vector<double> dist_;
  std::map<std::pair<int, CoverGroup::Element>, int> index_;
};

CoverBall cover_ball(const HomotopyEngine& engine, double eps, double radius, const KernelSpec& kernel = {});

// Image index of every ball node under preconcatenation by the loop, -1 when
// the image leaves the ball.
std::vector<int> deck_action(const CoverBall& ball, const Chain& loop);

struct AbelianInvariants {
  int rank = 0;
  std::vector<std::int64_t> torsion;
};
AbelianInvariants quotient_group_invariants(const CoverBall& ball);

struct GeneratorReport {
  std::vector<Chain> chains;
  std::vector<H1Class> classes;
  std::vector<Triad> triads;
  bool generates_h1 = false;
  bool full_generation_certified = false;
  GroupKind group_kind = GroupKind::Trivial;
  SpectrumReport spectrum;
};

GeneratorReport lollichain_generators(const HomotopyEngine& engine, double eps, double eta,
                                      const SearchBudget& budget = {}, unsigned threads = 0);

// Sublattices of H1 at eps in its Smith coordinates, returned in Hermite form
// with the torsion relations included. The first holds the classes that die
// at the coarser scale delta, the second the classes of the kernel lollichains.
IntMatrix theta_kernel_lattice(const HomotopyEngine& engine, double eps, double delta);
IntMatrix kernel_class_lattice(const HomotopyEngine& engine, double eps, const KernelSpec& kernel);

void write_ball_graph(std::ostream& out, const CoverBall& ball);

}  // namespace epscov
