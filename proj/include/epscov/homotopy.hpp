#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "epscov/chain.hpp"
#include "epscov/group.hpp"
#include "epscov/metric_graph.hpp"

namespace epscov {

struct H1Class {
  std::vector<std::int64_t> coords;
  std::vector<std::int64_t> factors;  // invariant factor per coordinate, 0 = free

  bool is_zero() const;
  H1Class negated() const;
  bool operator==(const H1Class& o) const { return coords == o.coords; }
  bool operator!=(const H1Class& o) const { return !(*this == o); }
};

// Presentation of the fundamental group of the Rips flag complex on a net.
class Presentation {
 public:
  Presentation(std::shared_ptr<const Net> net, double eps, int basepoint);

  double scale() const { return eps_; }
  int basepoint() const { return basepoint_; }
  const Net& net() const { return *net_; }
  int num_generators() const { return num_generators_; }
  std::size_t num_rips_edges() const { return num_edges_; }
  std::size_t num_relators() const { return relators_.size(); }
  Word relator(std::size_t i) const { return relators_.at(i); }
  const SimplifiedGroup& group() const { return group_; }

  bool adjacent(int a, int b) const { return a == b || strictly_less(net_->distance(a, b), eps_); }
  // Word in the raw generators of one Rips edge; empty on tree edges.
  Word edge_word(int a, int b) const;
  Word path_word(const std::vector<int>& ids) const;
  // Simplified word of a closed or open net path.
  Word group_word(const std::vector<int>& ids) const { return group_.map_word(path_word(ids)); }
  H1Class h1(const Word& simplified) const;
  std::vector<int> tree_path_from_base(int v) const;

 private:
  std::shared_ptr<const Net> net_;
  double eps_;
  int basepoint_;
  int num_generators_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<std::int32_t> gen_;  // N x N signed generator letter, 0 on tree edges
  std::vector<int> parent_;
  WordList relators_;
  SimplifiedGroup group_;
};

struct SearchBudget {
  std::size_t max_points = 0;  // 0 selects 4 * floor(2 diam / eps + 1)
  std::size_t max_states = 1000000;
};

enum class VerdictKind { Null, NotNull, Unknown };
const char* to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  Homotopy witness;        // Null: replays from the loop to a one-point chain
  H1Class certificate;     // NotNull: nonzero class, or zero with a word certificate
  Word word_certificate;   // NotNull in a free group: reduced nonempty word
  std::size_t states = 0;  // search states visited
  std::string note;
};

struct SnappedChain {
  std::vector<int> ids;
  double max_shift = 0.0;
};

class HomotopyEngine {
 public:
  HomotopyEngine(const MetricGraph& g, double resolution, int basepoint = 0);
  explicit HomotopyEngine(Net net, int basepoint = 0);

  const Net& net() const { return *net_; }
  std::shared_ptr<const Net> net_ptr() const { return net_; }
  const MetricGraph& graph() const { return net_->graph(); }
  int basepoint() const { return basepoint_; }

  std::shared_ptr<const Presentation> presentation(double eps) const;

  // Net ids of a chain, refusing when a shift reaches gap_excess / 2.
  SnappedChain snap(const Chain& c) const;
  Chain net_chain(const std::vector<int>& ids, double eps) const;

  Word word(const Chain& c) const;
  H1Class h1_class(const Chain& loop) const;
  Verdict is_null(const Chain& loop, const SearchBudget& budget = {}) const;
  // Independent recheck of a verdict's certificate.
  bool audit(const Chain& loop, const Verdict& v) const;

  std::size_t default_max_points(double eps) const;

  // The chain itself when it snaps, else its midpoint refinement, which has
  // the same class and room to snap whenever the resolution is below eps / 4.
  Chain snappable(const Chain& c, std::vector<BasicMove>* log = nullptr) const;

 private:
  std::shared_ptr<const Net> net_;
  int basepoint_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::shared_ptr<const Presentation>> cache_;
};

H1Class h1_class(const HomotopyEngine& engine, const Chain& loop);
Verdict is_null(const HomotopyEngine& engine, const Chain& loop, const SearchBudget& budget = {});
// The same chain read at a coarser scale.
Chain theta(const MetricGraph& g, const Chain& loop, double delta);

}  // namespace epscov
