#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "epscov/gh.hpp"

namespace epscov {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// Rounds to 12 significant digits so that dumps are stable across platforms.
double round12(double x);

Json to_json(const GraphPoint& p);
Json to_json(const Chain& c);
Json to_json(const H1Class& h);
Json to_json(const Verdict& v);
Json to_json(const Triad& t);
Json to_json(const SpectrumReport& r);
Json to_json(const CoverBall& ball);
Json to_json(const GeneratorReport& r);
Json to_json(const ExperimentReport& r);
Json to_json(const std::vector<HawaiianStage>& stages);

GraphPoint point_from_json(const MetricGraph& g, const Json& j);
Chain chain_from_json(const MetricGraph& g, const Json& j);
// {"triads": [{"ids": [a, b, c]} | {"points": [p, q, r]}, ...], "eta": x}
KernelSpec kernel_from_json(const Net& net, const Json& j);
ExperimentConfig experiment_from_json(const Json& j);

void write_spectrum_csv(std::ostream& out, const SpectrumReport& r);
void write_experiment_csv(std::ostream& out, const ExperimentReport& r);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace epscov
