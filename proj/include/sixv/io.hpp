#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "sixv/kernel.hpp"
#include "sixv/sim.hpp"
#include "sixv/vertex.hpp"

namespace sixv {

// Pattern codec for test fixtures:
//   {"eps":[0,1,...], "E":{"m":pos,...}, "loop_sign":1|-1|null}
nlohmann::json pattern_to_json(const ChangePattern& p);
ChangePattern pattern_from_json(const nlohmann::json& j);

// Transition pmf as the CLI `neighbors` payload: array of
//   {"target":"+-","label":"E+","prob_num":...,"prob_den":...,"prob_float":...}
// with {"loop":"+"} instead of "target" for loop entries. Numerators and
// denominators are JSON integers when they fit, decimal strings otherwise.
nlohmann::json pmf_to_json(const TransitionPmf& pmf);

// Trajectory JSON-lines: header {"K":..,"seed":..,"version":1}, then one
// record {"t":..,"y":"+-..","label":"E+"|null,"z1":..} per state (t=0
// carries a null label). Byte-stable for fixed inputs.
void write_trajectory(std::ostream& os, const Trajectory& t, std::uint64_t seed);
Trajectory read_trajectory(std::istream& is);

// SimConfig file: JSON object or flat key=value lines with the same keys
// (k, steps, chains, seed, start, field, out; infinite_prefix/infinite_period
// as comma-separated block lists).
SimConfig config_from_json(const nlohmann::json& j);
SimConfig load_config(const std::string& path);

std::string rational_to_string(const Rational& r);  // "num/den"

}  // namespace sixv
