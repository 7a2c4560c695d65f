#include "epscov/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "epscov/serialize.hpp"

namespace epscov {

namespace {

bool needs_graph(const std::string& s) { return s == "spectrum" || s == "cover" || s == "generators"; }

void positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
}

MetricGraph load(const RunConfig& c) { return c.gen.empty() ? load_graph(c.graph) : make_named(c.gen); }

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

struct Emitter {
  const RunConfig& cfg;
  std::ostream& out;
  // Main document to PREFIX.json, or to stdout without a prefix.
  void main(const Json& j) const {
    if (cfg.out.empty())
      out << dump(j);
    else
      write_file(cfg.out + ".json", dump(j));
  }
  void side(const std::string& ext, const std::string& text) const {
    if (!cfg.out.empty()) write_file(cfg.out + ext, text);
  }
  std::ostream* summary() const { return cfg.out.empty() ? nullptr : &out; }
};

int do_spectrum(const RunConfig& c, const Emitter& em) {
  HomotopyEngine eng(load(c), c.resolution);
  SpectrumOptions opt{c.min_scale, c.max_scale, c.eta, c.budget, c.threads};
  if (opt.eta == 0.0) opt.eta = 2 * c.resolution;
  if (opt.min_scale == 0.0) opt.min_scale = 3 * c.resolution;
  if (opt.max_scale == 0.0) opt.max_scale = eng.graph().diameter() + opt.eta;
  auto rep = critical_spectrum(eng, opt);
  em.main(to_json(rep));
  std::ostringstream csv;
  write_spectrum_csv(csv, rep);
  em.side(".csv", csv.str());
  if (auto* s = em.summary()) {
    *s << "critical values in [" << opt.min_scale << ", " << opt.max_scale << "]:\n";
    for (const auto& e : rep.entries)
      *s << "  " << e.value << " +- " << e.error << "  multiplicity " << e.multiplicity << "  " << to_string(e.certainty)
         << "\n";
    if (!rep.unresolved.empty()) *s << "  " << rep.unresolved.size() << " triads undecided\n";
  }
  return rep.complete() ? 0 : 2;
}

int do_cover(const RunConfig& c, const Emitter& em) {
  HomotopyEngine eng(load(c), c.resolution);
  KernelSpec spec;
  if (!c.triads.empty()) spec = kernel_from_json(eng.net(), read_json(c.triads));
  CoverBall ball(eng, c.eps, c.radius, spec);
  em.main(to_json(ball));
  std::ostringstream g;
  write_ball_graph(g, ball);
  em.side(".graph", g.str());
  if (auto* s = em.summary())
    *s << "ball of radius " << c.radius << " at scale " << c.eps << ": " << ball.size() << " nodes, "
       << ball.edges().size() << " edges, deck group " << to_string(ball.group().group().kind()) << " rank "
       << ball.group().group().rank() << "\n";
  return 0;
}

int do_generators(const RunConfig& c, const Emitter& em) {
  HomotopyEngine eng(load(c), c.resolution);
  double eta = c.eta > 0 ? c.eta : 2 * c.resolution;
  auto rep = lollichain_generators(eng, c.eps, eta, c.budget, c.threads);
  em.main(to_json(rep));
  if (auto* s = em.summary())
    *s << rep.chains.size() << " lollichain generators at scale " << c.eps << "; full generation "
       << (rep.full_generation_certified ? "certified" : "not certified") << "\n";
  return rep.spectrum.complete() ? 0 : 2;
}

int do_gh(const RunConfig& c, const Emitter& em, std::ostream& out) {
  auto cfg = experiment_from_json(read_json(c.config));
  if (c.threads) cfg.threads = c.threads;
  auto rep = run_convergence_experiment(cfg);
  std::ostringstream csv;
  write_experiment_csv(csv, rep);
  if (c.out.empty()) {
    out << csv.str();
  } else {
    em.main(to_json(rep));
    em.side(".csv", csv.str());
    out << csv.str();
  }
  return 0;
}

int do_demo(const RunConfig& c, const Emitter& em, std::ostream& out) {
  Json doc{{"format_version", kFormatVersion}, {"kind", "demo"}};
  auto show = [&](const ExperimentReport& r) {
    out << r.config.family << " family, eps " << r.config.eps << ", limit deck rank " << r.limit_deck.rank << "\n";
    for (const auto& w : r.rows)
      out << "  i=" << w.index << "  gh in [" << w.gh_lower << ", " << w.gh_upper << "]  deck rank " << w.deck.rank
          << "\n";
  };
  if (c.which == "all" || c.which == "circle") {
    ExperimentConfig e;
    e.family = "circle";
    e.indices = {2, 4, 8, 16, 32};
    e.threads = c.threads;
    auto r = run_convergence_experiment(e);
    show(r);
    doc["circle"] = to_json(r);
  }
  if (c.which == "all" || c.which == "torus") {
    ExperimentConfig e;
    e.threads = c.threads;
    auto r = run_convergence_experiment(e);
    show(r);
    doc["torus"] = to_json(r);
  }
  if (c.which == "all" || c.which == "hawaiian") {
    auto st = hawaiian_demo(5, 0.2, 0.01, c.threads);
    out << "hawaiian stages at eps 0.2\n";
    for (const auto& s : st)
      out << "  k=" << s.k << "  valency " << s.valency << "  generators " << s.generators << "\n";
    doc["hawaiian"] = to_json(st);
  }
  if (!doc.contains("circle") && !doc.contains("torus") && !doc.contains("hawaiian"))
    throw DomainError("unknown demo " + c.which);
  if (!c.out.empty()) em.main(doc);
  return 0;
}

}  // namespace

void RunConfig::validate() const {
  if (needs_graph(subcommand)) {
    if (gen.empty() == graph.empty()) throw DomainError("give exactly one of --gen and --graph");
    positive(resolution, "--res");
  }
  if (subcommand == "cover" || subcommand == "generators") {
    positive(eps, "--eps");
    if (!(resolution < eps / 2)) throw DomainError("resolution must be below eps / 2");
  }
  if (subcommand == "cover") positive(radius, "--radius");
  if (subcommand == "spectrum") {
    if (min_scale != 0.0) {
      positive(min_scale, "--min");
      if (!(resolution < min_scale / 2)) throw DomainError("resolution must be below the scan minimum / 2");
    }
    if (max_scale != 0.0) positive(max_scale, "--max");
    if (min_scale != 0.0 && max_scale != 0.0 && max_scale < min_scale) throw DomainError("--max is below --min");
  }
  if (eta < 0.0) throw DomainError("--eta must be nonnegative");
  if (subcommand == "gh" && config.empty()) throw DomainError("gh needs --config");
  if (budget.max_states == 0) throw DomainError("--max-states must be positive");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Discrete homotopy of metric graphs: critical spectra, circle covers, convergence"};
  app.require_subcommand(1);
  auto graph_opts = [&](CLI::App* s) {
    s->add_option("--gen", cfg.gen, "named generator: circle:a, torus:a,b,n, wedge:l1,l2,..., segment:L, hawaiian:k");
    s->add_option("--graph", cfg.graph, "graph file");
    s->add_option("--res", cfg.resolution, "net resolution")->required();
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--out", cfg.out, "output prefix; without it the main document goes to stdout");
    s->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    s->add_option("--max-states", cfg.budget.max_states, "search states per verdict");
    s->add_option("--max-points", cfg.budget.max_points, "chain length cap per verdict (0 = automatic)");
  };
  auto* sp = app.add_subcommand("spectrum", "homotopy critical spectrum");
  graph_opts(sp);
  common(sp);
  sp->add_option("--min", cfg.min_scale, "scan minimum (default 3 * res)");
  sp->add_option("--max", cfg.max_scale, "scan maximum (default diameter + eta)");
  sp->add_option("--eta", cfg.eta, "triad slack (default 2 * res)");
  auto* cv = app.add_subcommand("cover", "ball in a circle cover");
  graph_opts(cv);
  common(cv);
  cv->add_option("--eps", cfg.eps, "scale")->required();
  cv->add_option("--radius", cfg.radius, "ball radius")->required();
  cv->add_option("--triads", cfg.triads, "kernel triad file (JSON)");
  auto* gn = app.add_subcommand("generators", "lollichain generators");
  graph_opts(gn);
  common(gn);
  gn->add_option("--eps", cfg.eps, "scale")->required();
  gn->add_option("--eta", cfg.eta, "triad slack (default 2 * res)");
  auto* gh = app.add_subcommand("gh", "convergence experiment");
  common(gh);
  gh->add_option("--config", cfg.config, "experiment config (JSON)")->required();
  auto* dm = app.add_subcommand("demo", "worked examples");
  common(dm);
  dm->add_option("--which", cfg.which, "circle, torus, hawaiian or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }
  for (auto* s : app.get_subcommands()) cfg.subcommand = s->get_name();

  try {
    cfg.validate();
    Emitter em{cfg, out};
    if (cfg.subcommand == "spectrum") return do_spectrum(cfg, em);
    if (cfg.subcommand == "cover") return do_cover(cfg, em);
    if (cfg.subcommand == "generators") return do_generators(cfg, em);
    if (cfg.subcommand == "gh") return do_gh(cfg, em, out);
    return do_demo(cfg, em, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnresolvedError& e) {
    err << "undecided: " << e.what() << "\n";
    return 2;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace epscov
