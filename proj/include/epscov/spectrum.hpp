#pragma once

#include <array>
#include <optional>
#include <vector>

#include "epscov/homotopy.hpp"

namespace epscov {

struct Triad {
  std::array<int, 3> ids{};  // net ids, increasing
  std::array<GraphPoint, 3> points;
  double side = 0.0;  // mean of the three pairwise distances
  double eta = 0.0;
};

enum class Certainty { Certain, Heuristic };
const char* to_string(Certainty c);

std::vector<Triad> triads_at(const Net& net, double eps, double eta);
Triad make_triad(const Net& net, int a, int b, int c, double eta);
Chain triad_loop(const Triad& t);
Chain triad_refinement(const MetricGraph& g, const Triad& t, double scale = 0.0);

// Verdict on the midpoint refinement at the triad's side: NotNull means essential.
Verdict is_essential(const HomotopyEngine& engine, const Triad& t, const SearchBudget& budget = {});

struct TriadEquivalence {
  bool equivalent = false;
  Certainty certainty = Certainty::Heuristic;
};
TriadEquivalence equivalent_triads(const HomotopyEngine& engine, const Triad& a, const Triad& b);

struct SpectrumOptions {
  double min_scale = 0.0;
  double max_scale = 0.0;
  double eta = 0.0;
  SearchBudget budget;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct SpectrumEntry {
  double value = 0.0;
  double error = 0.0;
  double scale = 0.0;  // scale at which classes were compared
  int multiplicity = 0;
  Certainty certainty = Certainty::Certain;
  std::vector<Triad> representatives;  // one per class
  std::vector<H1Class> classes;
  std::size_t essential = 0;
  std::size_t unknown = 0;
  std::string note;
};

struct SpectrumReport {
  std::vector<SpectrumEntry> entries;  // descending value
  double min_scale = 0.0;
  double max_scale = 0.0;
  double resolution = 0.0;
  double eta = 0.0;
  std::size_t triads_examined = 0;
  std::vector<Triad> unresolved;  // Unknown verdicts outside every entry

  bool complete() const;
};

SpectrumReport critical_spectrum(const HomotopyEngine& engine, const SpectrumOptions& options);

struct CoveringValue {
  double value;
  int multiplicity;
};
std::vector<CoveringValue> covering_spectrum(const SpectrumReport& report);

}  // namespace epscov
