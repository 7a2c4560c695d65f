#include "epscov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace epscov {

const char* to_string(Certainty c) { return c == Certainty::Certain ? "certain" : "heuristic"; }

Triad make_triad(const Net& net, int a, int b, int c, double eta) {
  std::array<int, 3> ids{a, b, c};
  std::sort(ids.begin(), ids.end());
  Triad t;
  t.ids = ids;
  for (int k = 0; k < 3; ++k) t.points[k] = net.point(ids[k]);
  t.side = (net.distance(ids[0], ids[1]) + net.distance(ids[1], ids[2]) + net.distance(ids[0], ids[2])) / 3.0;
  t.eta = eta;
  return t;
}

std::vector<Triad> triads_at(const Net& net, double eps, double eta) {
  std::vector<Triad> out;
  const int n = static_cast<int>(net.size());
  auto ok = [&](int a, int b) { return std::fabs(net.distance(a, b) - eps) <= eta + kTol; };
  std::vector<int> near;
  for (int i = 0; i < n; ++i) {
    near.clear();
    for (int j = i + 1; j < n; ++j)
      if (ok(i, j)) near.push_back(j);
    for (std::size_t x = 0; x < near.size(); ++x)
      for (std::size_t y = x + 1; y < near.size(); ++y)
        if (ok(near[x], near[y])) out.push_back(make_triad(net, i, near[x], near[y], eta));
  }
  return out;
}

Chain triad_loop(const Triad& t) {
  return Chain{{t.points[0], t.points[1], t.points[2], t.points[0]}, t.side + t.eta + 2 * kTol};
}

Chain triad_refinement(const MetricGraph& g, const Triad& t, double scale) {
  Chain c = midpoint_refinement(g, triad_loop(t));
  c.scale = scale > 0.0 ? scale : t.side;
  return c;
}

Verdict is_essential(const HomotopyEngine& engine, const Triad& t, const SearchBudget& budget) {
  return engine.is_null(triad_refinement(engine.graph(), t), budget);
}

TriadEquivalence equivalent_triads(const HomotopyEngine& engine, const Triad& a, const Triad& b) {
  double scale = std::min(a.side, b.side);
  auto pres = engine.presentation(scale);
  Word wa = engine.word(triad_refinement(engine.graph(), a, scale));
  Word wb = engine.word(triad_refinement(engine.graph(), b, scale));
  H1Class ha = pres->h1(wa), hb = pres->h1(wb);
  if (ha != hb && ha != hb.negated()) return {false, Certainty::Certain};
  auto exact = pres->group().conjugate_up_to_inverse(wa, wb);
  if (exact) return {*exact, Certainty::Certain};
  return {true, Certainty::Heuristic};
}

bool SpectrumReport::complete() const {
  if (!unresolved.empty()) return false;
  return std::all_of(entries.begin(), entries.end(), [](const SpectrumEntry& e) { return e.certainty == Certainty::Certain; });
}

namespace {

struct Judged {
  Triad triad;
  VerdictKind kind;
};

}  // namespace

SpectrumReport critical_spectrum(const HomotopyEngine& engine, const SpectrumOptions& opt) {
  const Net& net = engine.net();
  const MetricGraph& g = engine.graph();
  if (!(opt.eta >= 0.0)) throw DomainError("eta must be nonnegative");
  if (!(opt.min_scale > 2 * net.resolution())) throw DomainError("scan minimum must exceed twice the net resolution");
  if (!(opt.max_scale >= opt.min_scale)) throw DomainError("empty scan range");
  SpectrumReport report;
  report.min_scale = opt.min_scale;
  report.max_scale = opt.max_scale;
  report.resolution = net.resolution();
  report.eta = opt.eta;

  // Near-equilateral triples whose nominal side lies in the range.
  std::vector<Triad> cands;
  const int n = static_cast<int>(net.size());
  const double lo = opt.min_scale - opt.eta - kTol, hi = opt.max_scale + opt.eta + kTol;
  std::vector<int> near;
  for (int i = 0; i < n; ++i) {
    near.clear();
    for (int j = i + 1; j < n; ++j) {
      double d = net.distance(i, j);
      if (d >= lo && d <= hi) near.push_back(j);
    }
    for (std::size_t x = 0; x < near.size(); ++x) {
      double dij = net.distance(i, near[x]);
      for (std::size_t y = x + 1; y < near.size(); ++y) {
        double dik = net.distance(i, near[y]);
        if (std::fabs(dij - dik) > opt.eta + kTol) continue;
        double djk = net.distance(near[x], near[y]);
        double mx = std::max({dij, dik, djk}), mn = std::min({dij, dik, djk});
        if (mx - mn > opt.eta + kTol) continue;
        double side = (dij + dik + djk) / 3.0;
        if (side < opt.min_scale - kTol || side > opt.max_scale + kTol) continue;
        cands.push_back(make_triad(net, i, near[x], near[y], opt.eta));
      }
    }
  }
  report.triads_examined = cands.size();

  // Build presentations serially so the workers only read the cache.
  for (const auto& t : cands) engine.presentation(t.side);
  std::vector<VerdictKind> kinds(cands.size());
  unsigned threads = opt.threads ? opt.threads : default_threads();
  parallel_for(cands.size(), threads, [&](std::size_t i) { kinds[i] = is_essential(engine, cands[i], opt.budget).kind; });

  std::vector<Triad> essential, unknown;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (kinds[i] == VerdictKind::NotNull) essential.push_back(cands[i]);
    if (kinds[i] == VerdictKind::Unknown) unknown.push_back(cands[i]);
  }
  std::stable_sort(essential.begin(), essential.end(), [](const Triad& a, const Triad& b) { return a.side < b.side; });

  // Cluster by side with width 2 eta.
  std::vector<std::vector<Triad>> clusters;
  for (const auto& t : essential) {
    if (clusters.empty() || t.side > clusters.back().front().side + 2 * opt.eta + kTol) clusters.emplace_back();
    clusters.back().push_back(t);
  }
  std::vector<char> claimed(unknown.size(), 0);
  for (const auto& cl : clusters) {
    SpectrumEntry e;
    e.scale = cl.front().side;
    double sum = 0;
    for (const auto& t : cl) sum += t.side;
    e.value = sum / static_cast<double>(cl.size());
    e.error = opt.eta + net.resolution();
    e.essential = cl.size();
    double wlo = cl.front().side - opt.eta, whi = cl.back().side + opt.eta;
    for (std::size_t u = 0; u < unknown.size(); ++u)
      if (unknown[u].side >= wlo - kTol && unknown[u].side <= whi + kTol) {
        claimed[u] = 1;
        ++e.unknown;
      }
    auto pres = engine.presentation(e.scale);
    const auto& grp = pres->group();
    std::vector<Word> class_words;
    bool exact = true;
    for (const auto& t : cl) {
      Word w = engine.word(triad_refinement(g, t, e.scale));
      H1Class h = pres->h1(w);
      bool found = false;
      for (std::size_t c = 0; c < class_words.size() && !found; ++c) {
        if (h != e.classes[c] && h != e.classes[c].negated()) continue;
        auto same = grp.conjugate_up_to_inverse(w, class_words[c]);
        if (!same) {
          exact = false;
          found = true;
        } else if (*same) {
          found = true;
        }
      }
      if (!found) {
        class_words.push_back(w);
        e.classes.push_back(h);
        e.representatives.push_back(t);
      }
    }
    e.multiplicity = static_cast<int>(class_words.size());
    if (e.unknown > 0) {
      e.certainty = Certainty::Heuristic;
      e.note = "unknown verdicts inside the entry window";
    } else if (!exact) {
      e.certainty = Certainty::Heuristic;
      e.note = "classes compared by H1 only";
    }
    report.entries.push_back(std::move(e));
  }
  for (std::size_t u = 0; u < unknown.size(); ++u)
    if (!claimed[u]) report.unresolved.push_back(unknown[u]);
  std::sort(report.entries.begin(), report.entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value > b.value; });
  return report;
}

std::vector<CoveringValue> covering_spectrum(const SpectrumReport& report) {
  std::vector<CoveringValue> out;
  for (const auto& e : report.entries) out.push_back(CoveringValue{1.5 * e.value, e.multiplicity});
  return out;
}

}  // namespace epscov
