#pragma once

// JSON and CSV formats for scenarios, witnesses, correlation tables and
// attack reports. Matrices are nested arrays of [re, im] pairs.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "qiw/adversary.hpp"

namespace qiw::io {

using nlohmann::json;

// Malformed input. The message starts with a field path (e.g.
// "ensembleA.d: expected an integer") or a line/column for syntax errors.
class ParseError : public Error {
 public:
  using Error::Error;
};

struct ScenarioSpec {
  DensityMatrix rho;
  InputEnsemble ensembleA;
  InputEnsemble ensembleB;
  PositiveMapSpec map = PositiveMapSpec::transposition(2);
  std::string description;  // e.g. "werner d=2 v=0.5"
};

// Parses a scenario document. `default_seed` feeds SIC searches that do not
// carry their own seed.
ScenarioSpec parse_scenario(const json& doc, std::uint64_t default_seed);
ScenarioSpec parse_scenario_text(const std::string& text, std::uint64_t default_seed);

json parse_json_text(const std::string& text);
std::string read_file(const std::string& path);

json complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const json& j, const std::string& path);
json complex_vector_to_json(std::span<const Complex> v);
ComplexVector complex_vector_from_json(const json& j, const std::string& path);
json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const json& j, const std::string& path);
json ensemble_to_json(const InputEnsemble& e);

struct WitnessFile {
  WitnessCoefficients witness;
  std::string id;
  double tol = kDefaultTol;
  std::uint64_t seed = 42;
  std::string source;  // scenario description it was built from
};

// Stable identifier derived from the coefficient values.
std::string witness_id(const WitnessCoefficients& w);

json witness_to_json(const WitnessFile& w);
WitnessFile witness_from_json(const json& doc);

json correlation_table_to_json(const CorrelationTable& table);

// Fixed 17-significant-digit decimal formatting.
std::string format_number(double x);

// Header "s\t,1,..,nT"; one row per s, labels 1-based.
void write_beta_csv(std::ostream& os, const RealMatrix& beta);
// Header "s,t,P00,P01,P10,P11"; labels 1-based.
void write_table_csv(std::ostream& os, const CorrelationTable& table);

}  // namespace qiw::io
