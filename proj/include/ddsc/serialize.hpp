#ifndef DDSC_SERIALIZE_HPP_
#define DDSC_SERIALIZE_HPP_

#include <string>

#include "ddsc/bundle.hpp"

namespace ddsc
{

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Debug JSON of a set: {type, center, generators} or {type, dim, H, h}.
std::string set_to_json(const Zonotope& z);
std::string set_to_json(const HPolytope& p);
std::string set_to_json(const MatrixZonotope& M);
Zonotope zonotope_from_json(const std::string& text);
HPolytope hpolytope_from_json(const std::string& text);
MatrixZonotope matrix_zonotope_from_json(const std::string& text);

TrajectoryBank parse_bank(const std::string& text);
std::string dump_bank(const TrajectoryBank& bank);

ScenarioConfig parse_scenario(const std::string& text);

std::string dump_bundle(const SynthesisBundle& b);
SynthesisBundle parse_bundle(const std::string& text);

/// Reads back the columns of a trace CSV that the report needs.
ScenarioTrace parse_trace_csv(const std::string& text);

} // namespace ddsc

#endif
