#include "epscov/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace epscov {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

Json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json invariants(const AbelianInvariants& a) { return Json{{"rank", a.rank}, {"torsion", a.torsion}}; }

Json group_json(const SimplifiedGroup& g) {
  return Json{{"kind", to_string(g.kind())},
              {"generators", g.num_generators()},
              {"relators", g.relators().size()},
              {"rank", g.rank()},
              {"torsion", g.torsion()}};
}

}  // namespace

Json to_json(const GraphPoint& p) {
  if (p.is_vertex()) return Json{{"vertex", p.vertex}};
  return Json{{"edge", p.edge}, {"offset", num(p.offset)}};
}

Json to_json(const Chain& c) {
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back(to_json(p));
  return Json{{"scale", num(c.scale)}, {"points", pts}};
}

Json to_json(const H1Class& h) { return Json{{"coords", h.coords}, {"factors", h.factors}}; }

Json to_json(const Verdict& v) {
  Json j{{"kind", to_string(v.kind)}, {"states", v.states}, {"note", v.note}};
  if (v.kind == VerdictKind::Null) {
    Json moves = Json::array();
    for (const auto& m : v.witness.moves) {
      Json mv{{"kind", m.kind == MoveKind::Insert ? "insert" : "remove"}, {"index", m.index}};
      if (m.kind == MoveKind::Insert) mv["point"] = to_json(m.point);
      moves.push_back(mv);
    }
    j["witness"] = Json{{"start", to_json(v.witness.start)}, {"moves", moves}};
  }
  if (v.kind == VerdictKind::NotNull) {
    j["certificate"] = to_json(v.certificate);
    j["word_certificate"] = v.word_certificate;
  }
  return j;
}

Json to_json(const Triad& t) {
  Json pts = Json::array();
  for (const auto& p : t.points) pts.push_back(to_json(p));
  return Json{{"ids", t.ids}, {"points", pts}, {"side", num(t.side)}, {"eta", num(t.eta)}};
}

Json to_json(const SpectrumReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json reps = Json::array(), classes = Json::array();
    for (const auto& t : e.representatives) reps.push_back(to_json(t));
    for (const auto& c : e.classes) classes.push_back(to_json(c));
    entries.push_back(Json{{"value", num(e.value)},
                           {"error", num(e.error)},
                           {"scale", num(e.scale)},
                           {"multiplicity", e.multiplicity},
                           {"certainty", to_string(e.certainty)},
                           {"essential_triads", e.essential},
                           {"unknown_triads", e.unknown},
                           {"covering_value", num(1.5 * e.value)},
                           {"covering_error", num(1.5 * e.error)},
                           {"note", e.note},
                           {"representatives", reps},
                           {"classes", classes}});
  }
  Json unresolved = Json::array();
  for (const auto& t : r.unresolved) unresolved.push_back(to_json(t));
  return Json{{"format_version", kFormatVersion},
              {"kind", "spectrum"},
              {"min_scale", num(r.min_scale)},
              {"max_scale", num(r.max_scale)},
              {"resolution", num(r.resolution)},
              {"eta", num(r.eta)},
              {"triads_examined", r.triads_examined},
              {"complete", r.complete()},
              {"entries", entries},
              {"unresolved", unresolved}};
}

Json to_json(const CoverBall& ball) {
  const Net& net = ball.engine().net();
  Json nodes = Json::array();
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& n = ball.node(i);
    nodes.push_back(Json{{"id", i},
                         {"net_id", n.point},
                         {"projection", to_json(net.point(n.point))},
                         {"norm", num(n.norm)},
                         {"element", n.element},
                         {"parent", n.parent}});
  }
  Json kernel = Json::array();
  for (const auto& t : ball.kernel().triads) kernel.push_back(to_json(t));
  return Json{{"format_version", kFormatVersion},
              {"kind", "cover_ball"},
              {"scale", num(ball.scale())},
              {"radius", num(ball.radius())},
              {"resolution", num(net.resolution())},
              {"basepoint", ball.engine().basepoint()},
              {"group", group_json(ball.group().group())},
              {"kernel", kernel},
              {"edges", ball.edges().size()},
              {"nodes", nodes}};
}

Json to_json(const GeneratorReport& r) {
  Json gens = Json::array();
  for (std::size_t i = 0; i < r.chains.size(); ++i)
    gens.push_back(Json{{"chain", to_json(r.chains[i])}, {"class", to_json(r.classes[i])}, {"triad", to_json(r.triads[i])}});
  Json spec = to_json(r.spectrum);
  spec.erase("format_version");
  return Json{{"format_version", kFormatVersion},
              {"kind", "generators"},
              {"group_kind", to_string(r.group_kind)},
              {"generates_h1", r.generates_h1},
              {"full_generation_certified", r.full_generation_certified},
              {"generators", gens},
              {"spectrum", spec}};
}

Json to_json(const ExperimentReport& r) {
  Json rows = Json::array();
  for (const auto& w : r.rows) {
    Json row{{"index", w.index},
             {"gh_lower", num(w.gh_lower)},
             {"gh_upper", num(w.gh_upper)},
             {"sigma", num(w.sigma)},
             {"resolution", num(w.resolution)},
             {"ball_size", w.ball_size},
             {"deck", invariants(w.deck)},
             {"own_ball_upper", num(w.own_ball_upper)},
             {"line_lower", num(w.line_lower)},
             {"note", w.note}};
    if (w.p_checked)
      row["p_check"] = Json{{"sigma", num(w.p.sigma)},     {"omega0", num(w.p.omega0)},   {"delta", num(w.p.delta)},
                            {"eps", num(w.p.eps)},         {"m", num(w.p.p.m)},           {"b", num(w.p.p.b)},
                            {"max_excess", num(w.p.max_excess)}, {"max_ratio", num(w.p.max_ratio)},
                            {"pairs", w.p.pairs},          {"skipped", w.p.skipped},      {"ok", w.p.ok}};
    rows.push_back(row);
  }
  Json triads = Json::array();
  for (const auto& t : r.limit_triads) triads.push_back(to_json(t));
  const auto& c = r.config;
  return Json{{"format_version", kFormatVersion},
              {"kind", "experiment"},
              {"config", Json{{"family", c.family},
                              {"indices", c.indices},
                              {"eps", num(c.eps)},
                              {"radius", num(c.radius)},
                              {"resolution", num(c.resolution)},
                              {"tau", num(c.tau)},
                              {"eta", num(c.eta)},
                              {"grid", c.grid}}},
              {"limit", Json{{"deck", invariants(r.limit_deck)},
                             {"ball_size", r.limit_ball_size},
                             {"resolution", num(r.limit_resolution)},
                             {"triads", triads}}},
              {"rows", rows}};
}

Json to_json(const std::vector<HawaiianStage>& stages) {
  Json rows = Json::array();
  for (const auto& s : stages)
    rows.push_back(Json{{"k", s.k},
                        {"valency", s.valency},
                        {"generators", s.generators},
                        {"shortest_loop", num(s.shortest_loop)},
                        {"generation_certified", s.generation_certified}});
  return Json{{"format_version", kFormatVersion}, {"kind", "hawaiian"}, {"stages", rows}};
}

GraphPoint point_from_json(const MetricGraph& g, const Json& j) {
  if (j.contains("vertex")) {
    int v = j.at("vertex").get<int>();
    if (v < 0 || v >= g.num_vertices()) throw DomainError("vertex out of range");
    return GraphPoint::at_vertex(v);
  }
  return g.point(j.at("edge").get<int>(), j.at("offset").get<double>());
}

Chain chain_from_json(const MetricGraph& g, const Json& j) {
  Chain c;
  c.scale = j.at("scale").get<double>();
  for (const auto& p : j.at("points")) c.points.push_back(point_from_json(g, p));
  return c;
}

KernelSpec kernel_from_json(const Net& net, const Json& j) {
  KernelSpec spec;
  double eta = j.value("eta", 0.0);
  for (const auto& t : j.at("triads")) {
    std::array<int, 3> ids{};
    if (t.contains("ids")) {
      auto v = t.at("ids").get<std::vector<int>>();
      if (v.size() != 3) throw DomainError("a triad has three points");
      for (int k = 0; k < 3; ++k) {
        if (v[k] < 0 || static_cast<std::size_t>(v[k]) >= net.size()) throw DomainError("triad id is not a net point");
        ids[k] = v[k];
      }
    } else {
      const auto& pts = t.at("points");
      if (pts.size() != 3) throw DomainError("a triad has three points");
      for (int k = 0; k < 3; ++k) {
        ids[k] = net.find(point_from_json(net.graph(), pts[k]));
        if (ids[k] < 0) throw DomainError("triad point is not a net point");
      }
    }
    spec.triads.push_back(make_triad(net, ids[0], ids[1], ids[2], eta));
    if (t.contains("anchor")) {
      spec.anchors.resize(spec.triads.size());
      spec.anchors.back() = t.at("anchor").get<std::vector<int>>();
    }
  }
  if (!spec.anchors.empty()) spec.anchors.resize(spec.triads.size());
  return spec;
}

ExperimentConfig experiment_from_json(const Json& j) {
  ExperimentConfig c;
  c.family = j.value("family", c.family);
  if (j.contains("indices")) c.indices = j.at("indices").get<std::vector<int>>();
  c.eps = j.value("eps", c.eps);
  c.radius = j.value("radius", c.radius);
  c.resolution = j.value("resolution", c.resolution);
  c.tau = j.value("tau", c.tau);
  c.eta = j.value("eta", c.eta);
  c.grid = j.value("grid", c.grid);
  c.threads = j.value("threads", c.threads);
  if (j.contains("max_states")) c.budget.max_states = j.at("max_states").get<std::size_t>();
  for (const auto& [key, value] : j.items()) {
    static const char* known[] = {"family", "indices", "eps", "radius", "resolution", "tau",
                                  "eta",    "grid",    "threads", "max_states"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw DomainError("unknown experiment config key " + key);
  }
  return c;
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& r) {
  out << "value,error,multiplicity,certainty\n";
  for (const auto& e : r.entries)
    out << fmt(e.value) << "," << fmt(e.error) << "," << e.multiplicity << "," << to_string(e.certainty) << "\n";
}

void write_experiment_csv(std::ostream& out, const ExperimentReport& r) {
  out << "i,gh_lower,gh_upper,resolution,deck_rank,deck_torsion\n";
  for (const auto& w : r.rows) {
    std::string tor;
    for (std::size_t k = 0; k < w.deck.torsion.size(); ++k) tor += (k ? " " : "") + std::to_string(w.deck.torsion[k]);
    out << w.index << "," << fmt(w.gh_lower) << "," << fmt(w.gh_upper) << "," << fmt(w.resolution) << ","
        << w.deck.rank << "," << tor << "\n";
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace epscov
