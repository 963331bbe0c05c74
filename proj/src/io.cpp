#include "qiw/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qiw::io {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError((path.empty() ? std::string("<root>") : path) + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing required field");
  return *it;
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const json& j = require(obj, key, path);
  if (!j.is_string()) fail(join(path, key), "expected a string");
  return j.get<std::string>();
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  const json& j = require(obj, key, path);
  if (!j.is_number()) fail(join(path, key), "expected a number");
  return j.get<double>();
}

std::size_t to_size(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

std::size_t require_size(const json& obj, const std::string& key, const std::string& path) {
  return to_size(require(obj, key, path), join(path, key));
}

std::optional<std::uint64_t> optional_seed(const json& obj, const std::string& path) {
  const auto it = obj.find("seed");
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
    fail(join(path, "seed"), "expected a non-negative integer");
  return it->get<std::uint64_t>();
}

Complex complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(path, "expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

// Wraps library validation failures with the field path.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

InputEnsemble parse_ensemble(const json& j, const std::string& path, std::uint64_t default_seed) {
  const std::string kind = require_string(j, "kind", path);
  if (kind == "tetrahedron") return tetrahedron_ensemble();
  if (kind == "sic") {
    const std::size_t d = require_size(j, "d", path);
    if (d < 2 || d > 8) fail(join(path, "d"), "SIC ensembles are available for 2 <= d <= 8");
    const std::uint64_t seed = optional_seed(j, path).value_or(default_seed);
    return at_path(path, [&] { return sic_ensemble(d, seed); });
  }
  if (kind == "basis") {
    const std::size_t d = require_size(j, "d", path);
    if (d < 1) fail(join(path, "d"), "expected d >= 1");
    return computational_basis_ensemble(d);
  }
  if (kind == "explicit") {
    const json& states = require(j, "states", path);
    const std::string spath = join(path, "states");
    if (!states.is_array() || states.empty()) fail(spath, "expected a non-empty array of state vectors");
    std::vector<PureState> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string p = index_path(spath, i);
      ComplexVector amps = complex_vector_from_json(states[i], p);
      out.push_back(at_path(p, [&] { return PureState(std::move(amps)); }));
    }
    return at_path(spath, [&] { return InputEnsemble(std::move(out)); });
  }
  fail(join(path, "kind"), "unknown ensemble kind '" + kind + "' (expected tetrahedron, sic, basis or explicit)");
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json complex_vector_to_json(std::span<const Complex> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

ComplexVector complex_vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of [re, im] pairs");
  ComplexVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(complex_from_json(j[i], index_path(path, i)));
  return v;
}

json complex_matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

ComplexMatrix complex_matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) fail(index_path(path, 0), "expected a row array");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = index_path(path, i);
    if (!j[i].is_array() || j[i].size() != cols) fail(rp, "expected a row of " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k], index_path(rp, k));
  }
  if (!m.all_finite()) fail(path, "non-finite entry");
  return m;
}

json real_matrix_to_json(const RealMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

RealMatrix real_matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) fail(path, "expected a non-empty array of rows");
  RealMatrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::string rp = index_path(path, i);
    if (!j[i].is_array() || j[i].size() != m.cols()) fail(rp, "expected a row of " + std::to_string(m.cols()) + " numbers");
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (!j[i][k].is_number()) fail(index_path(rp, k), "expected a number");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

json ensemble_to_json(const InputEnsemble& e) {
  json states = json::array();
  for (const auto& s : e.states()) states.push_back(complex_vector_to_json(s.amplitudes()));
  return {{"kind", "explicit"}, {"states", std::move(states)}};
}

ScenarioSpec parse_scenario(const json& doc, std::uint64_t default_seed) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  const json& state = require(doc, "state", "");
  const std::string kind = require_string(state, "kind", "state");

  std::optional<DensityMatrix> rho;
  std::string description;
  if (kind == "werner") {
    const std::size_t d = require_size(state, "d", "state");
    if (d < 2) fail("state.d", "expected d >= 2");
    const double v = require_number(state, "v", "state");
    rho = at_path("state.v", [&] { return werner_state(d, v); });
    std::ostringstream ss;
    ss << "werner d=" << d << " v=" << format_number(v);
    description = ss.str();
  } else if (kind == "singlet") {
    rho = DensityMatrix::from_pure(singlet(), 2, 2);
    description = "singlet";
  } else if (kind == "matrix") {
    std::size_t dA = 0, dB = 0;
    if (state.contains("d")) {
      dA = dB = require_size(state, "d", "state");
    } else {
      dA = require_size(state, "dA", "state");
      dB = require_size(state, "dB", "state");
    }
    ComplexMatrix m = complex_matrix_from_json(require(state, "entries", "state"), "state.entries");
    rho = at_path("state.entries", [&] { return DensityMatrix(std::move(m), dA, dB); });
    description = "matrix " + std::to_string(dA) + "x" + std::to_string(dB);
  } else {
    fail("state.kind", "unknown state kind '" + kind + "' (expected werner, singlet or matrix)");
  }

  InputEnsemble eA = parse_ensemble(require(doc, "ensembleA", ""), "ensembleA", default_seed);
  InputEnsemble eB = parse_ensemble(require(doc, "ensembleB", ""), "ensembleB", default_seed);
  if (eA.dim() != rho->dimA()) fail("ensembleA", "dimension " + std::to_string(eA.dim()) + " differs from state dimA " + std::to_string(rho->dimA()));
  if (eB.dim() != rho->dimB()) fail("ensembleB", "dimension " + std::to_string(eB.dim()) + " differs from state dimB " + std::to_string(rho->dimB()));

  if (doc.contains("measurement")) {
    const std::string mk = require_string(doc["measurement"], "kind", "measurement");
    if (mk != "canonical") fail("measurement.kind", "only the canonical measurement is supported");
  }

  PositiveMapSpec map = PositiveMapSpec::transposition(rho->dimB());
  if (doc.contains("map")) {
    const json& mj = doc["map"];
    const std::string mk = require_string(mj, "kind", "map");
    if (mk == "choi") {
      const std::size_t din = require_size(mj, "dIn", "map");
      const std::size_t dout = require_size(mj, "dOut", "map");
      ComplexMatrix c = complex_matrix_from_json(require(mj, "matrix", "map"), "map.matrix");
      map = at_path("map.matrix", [&] { return PositiveMapSpec::choi(std::move(c), din, dout); });
      if (din != rho->dimB()) fail("map.dIn", "map input dimension must equal state dimB");
    } else if (mk != "transposition") {
      fail("map.kind", "unknown map kind '" + mk + "' (expected transposition or choi)");
    }
  }
  return {std::move(*rho), std::move(eA), std::move(eB), std::move(map), std::move(description)};
}

ScenarioSpec parse_scenario_text(const std::string& text, std::uint64_t default_seed) {
  return parse_scenario(parse_json_text(text), default_seed);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string witness_id(const WitnessCoefficients& w) {
  // FNV-1a over the formatted coefficients and dimensions.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  feed(std::to_string(w.dimA()) + "x" + std::to_string(w.dimB()));
  for (double b : w.beta.data()) feed(format_number(b) + ",");
  char buf[24];
  std::snprintf(buf, sizeof buf, "w-%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json witness_to_json(const WitnessFile& wf) {
  const auto& w = wf.witness;
  json map = {{"kind", w.map.name()}, {"dIn", w.map.input_dim()}, {"dOut", w.map.output_dim()}};
  if (w.map.kind() == MapKind::Choi) map["matrix"] = complex_matrix_to_json(*w.map.choi_matrix());
  return {
      {"format", "qiw-witness/1"},
      {"id", wf.id},
      {"source", wf.source},
      {"dimA", w.dimA()},
      {"dimB", w.dimB()},
      {"lambda", w.lambda},
      {"xi", complex_vector_to_json(w.xi.amplitudes())},
      {"map", std::move(map)},
      {"ensembleA", ensemble_to_json(w.ensembleA)},
      {"ensembleB", ensemble_to_json(w.ensembleB)},
      {"beta", real_matrix_to_json(w.beta)},
      {"tol", wf.tol},
      {"seed", wf.seed},
  };
}

WitnessFile witness_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  const std::string format = require_string(doc, "format", "");
  if (format != "qiw-witness/1") fail("format", "unsupported witness format '" + format + "'");
  WitnessFile wf;
  wf.id = require_string(doc, "id", "");
  if (doc.contains("source") && doc["source"].is_string()) wf.source = doc["source"].get<std::string>();
  wf.tol = doc.contains("tol") ? require_number(doc, "tol", "") : kDefaultTol;
  if (auto s = optional_seed(doc, "")) wf.seed = *s;

  auto& w = wf.witness;
  w.ensembleA = parse_ensemble(require(doc, "ensembleA", ""), "ensembleA", wf.seed);
  w.ensembleB = parse_ensemble(require(doc, "ensembleB", ""), "ensembleB", wf.seed);
  if (require_size(doc, "dimA", "") != w.ensembleA.dim()) fail("dimA", "does not match ensembleA");
  if (require_size(doc, "dimB", "") != w.ensembleB.dim()) fail("dimB", "does not match ensembleB");
  w.lambda = require_number(doc, "lambda", "");
  {
    ComplexVector xi = complex_vector_from_json(require(doc, "xi", ""), "xi");
    w.xi = at_path("xi", [&] { return PureState(std::move(xi)); });
  }
  const json& mj = require(doc, "map", "");
  const std::string mk = require_string(mj, "kind", "map");
  if (mk == "transposition") {
    w.map = PositiveMapSpec::transposition(require_size(mj, "dIn", "map"));
  } else if (mk == "choi") {
    ComplexMatrix c = complex_matrix_from_json(require(mj, "matrix", "map"), "map.matrix");
    const std::size_t din = require_size(mj, "dIn", "map"), dout = require_size(mj, "dOut", "map");
    w.map = at_path("map.matrix", [&] { return PositiveMapSpec::choi(std::move(c), din, dout); });
  } else {
    fail("map.kind", "unknown map kind '" + mk + "'");
  }
  w.beta = real_matrix_from_json(require(doc, "beta", ""), "beta");
  if (w.beta.rows() != w.ensembleA.size() || w.beta.cols() != w.ensembleB.size())
    fail("beta", "shape " + std::to_string(w.beta.rows()) + "x" + std::to_string(w.beta.cols()) +
                     " does not match ensemble sizes " + std::to_string(w.ensembleA.size()) + "x" +
                     std::to_string(w.ensembleB.size()));
  return wf;
}

json correlation_table_to_json(const CorrelationTable& table) {
  // P[a][b][s][t]
  json p = json::array();
  for (int a = 0; a < 2; ++a) {
    json pa = json::array();
    for (int b = 0; b < 2; ++b) {
      json pab = json::array();
      for (std::size_t s = 0; s < table.nS(); ++s) {
        json row = json::array();
        for (std::size_t t = 0; t < table.nT(); ++t) row.push_back(table(a, b, s, t));
        pab.push_back(std::move(row));
      }
      pa.push_back(std::move(pab));
    }
    p.push_back(std::move(pa));
  }
  return {{"nS", table.nS()}, {"nT", table.nT()}, {"P", std::move(p)}};
}

void write_beta_csv(std::ostream& os, const RealMatrix& beta) {
  os << "s\\t";
  for (std::size_t t = 0; t < beta.cols(); ++t) os << ',' << InputEnsemble::label(t);
  os << '\n';
  for (std::size_t s = 0; s < beta.rows(); ++s) {
    os << InputEnsemble::label(s);
    for (std::size_t t = 0; t < beta.cols(); ++t) os << ',' << format_number(beta(s, t));
    os << '\n';
  }
}

void write_table_csv(std::ostream& os, const CorrelationTable& table) {
  os << "s,t,P00,P01,P10,P11\n";
  for (std::size_t s = 0; s < table.nS(); ++s)
    for (std::size_t t = 0; t < table.nT(); ++t) {
      os << InputEnsemble::label(s) << ',' << InputEnsemble::label(t);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) os << ',' << format_number(table(a, b, s, t));
      os << '\n';
    }
}

}  // namespace qiw::io
