#pragma once

#include <iosfwd>
#include <string>

#include "epscov/homotopy.hpp"

namespace epscov {

struct RunConfig {
  std::string subcommand;
  std::string gen;    // named generator, e.g. "circle:1"
  std::string graph;  // or a graph file
  double resolution = 0.0;
  double eps = 0.0;
  double radius = 0.0;
  double eta = 0.0;
  double min_scale = 0.0;
  double max_scale = 0.0;
  std::string triads;  // kernel triad file
  std::string config;  // experiment config
  std::string which = "all";
  std::string out;  // output prefix; empty writes the main document to stdout
  SearchBudget budget;
  unsigned threads = 0;

  // Throws DomainError on inconsistent parameters.
  void validate() const;
};

// 0 success, 1 domain or usage error, 2 when an undecided verdict affected the result.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epscov
