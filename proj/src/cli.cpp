#include "qiw/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qiw/io.hpp"

namespace qiw::cli {

namespace {

using io::json;

struct Options {
  std::string scenario;
  std::string witness;
  std::string out;
  std::string format = "json";
  std::size_t samples = 10000;
  std::size_t budget = 200;
  std::uint64_t seed = 42;
  int workers = 0;
  double tol = kDefaultTol;
};

class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QIW_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CommandError(kExitParse, std::string("QIW_SEED: not an unsigned integer: '") + env + "'");
    }
  }
  return 42;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CommandError(kExitFailure, path + ": cannot open for writing");
  os << text;
}

std::string beta_csv_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".beta.csv");
  return p.string();
}

io::WitnessFile load_witness(const std::string& path) {
  json doc = io::parse_json_text(io::read_file(path));
  // Accept either a bare witness document or a build report wrapping one.
  if (doc.is_object() && doc.contains("witness") && !doc.contains("format")) doc = doc["witness"];
  return io::witness_from_json(doc);
}

int cmd_build(const Options& opt, std::ostream& out) {
  const io::ScenarioSpec spec = io::parse_scenario_text(io::read_file(opt.scenario), opt.seed);
  io::WitnessFile wf;
  wf.witness = build_witness(spec.rho, spec.map, spec.ensembleA, spec.ensembleB);
  wf.id = io::witness_id(wf.witness);
  wf.tol = opt.tol;
  wf.seed = opt.seed;
  wf.source = spec.description;
  const json doc = io::witness_to_json(wf);

  if (!opt.out.empty()) {
    write_text(opt.out, doc.dump(2) + "\n");
    std::ostringstream csv;
    io::write_beta_csv(csv, wf.witness.beta);
    write_text(beta_csv_path(opt.out), csv.str());
  }
  if (opt.format == "csv") {
    io::write_beta_csv(out, wf.witness.beta);
  } else {
    json report = {{"witness", doc}, {"seed", opt.seed}, {"tol", opt.tol}};
    if (!opt.out.empty()) report["files"] = {opt.out, beta_csv_path(opt.out)};
    out << report.dump(2) << '\n';
  }
  return kExitOk;
}

bool same_ensemble(const InputEnsemble& a, const InputEnsemble& b, double tol) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (max_abs_diff(a.projector(i), b.projector(i)) > tol) return false;
  return true;
}

int cmd_eval(const Options& opt, std::ostream& out) {
  const io::ScenarioSpec spec = io::parse_scenario_text(io::read_file(opt.scenario), opt.seed);
  const io::WitnessFile wf = load_witness(opt.witness);
  const auto& w = wf.witness;
  if (w.dimA() != spec.rho.dimA() || w.dimB() != spec.rho.dimB())
    throw CommandError(kExitDimensionMismatch,
                       "dimension mismatch: witness is " + std::to_string(w.dimA()) + "x" + std::to_string(w.dimB()) +
                           ", scenario state is " + std::to_string(spec.rho.dimA()) + "x" +
                           std::to_string(spec.rho.dimB()));
  if (w.beta.rows() != spec.ensembleA.size() || w.beta.cols() != spec.ensembleB.size())
    throw CommandError(kExitDimensionMismatch, "dimension mismatch: witness coefficients do not match the scenario's "
                                               "ensemble sizes");
  if (!same_ensemble(w.ensembleA, spec.ensembleA, 1e-8) || !same_ensemble(w.ensembleB, spec.ensembleB, 1e-8))
    throw CommandError(kExitDimensionMismatch, "ensemble mismatch: the scenario's input states differ from the "
                                               "witness's input states");

  const CorrelationTable table = correlations(canonical_scenario(spec.rho, spec.ensembleA, spec.ensembleB));
  const double i_quantum = evaluate_inequality(w, table);
  const double i_predicted = predicted_quantum_value(w, w.dimA(), w.dimB());
  const double diff = i_quantum - i_predicted;

  if (opt.format == "csv") {
    io::write_table_csv(out, table);
    return kExitOk;
  }
  json report = {{"quantum",
                  {{"table", io::correlation_table_to_json(table)},
                   {"I_quantum", i_quantum},
                   {"I_predicted", i_predicted},
                   {"difference", diff},
                   {"agree", std::abs(diff) <= opt.tol},
                   {"violation", i_quantum < 0.0},
                   {"witness_id", wf.id},
                   {"scenario", spec.description}}},
                 {"seed", opt.seed},
                 {"tol", opt.tol}};
  const std::string text = report.dump(2) + "\n";
  if (!opt.out.empty()) write_text(opt.out, text);
  out << text;
  return kExitOk;
}

int cmd_attack(const Options& opt, std::ostream& out, std::ostream& err) {
  const io::WitnessFile wf = load_witness(opt.witness);
  const auto& w = wf.witness;
  const SampleReport sampled = sample_inequality(w, opt.samples, opt.seed, opt.workers);
  const OptimizerResult optimized = minimize_inequality(w, opt.budget, opt.seed, opt.workers);
  const double min_i = opt.samples > 0 ? std::min(sampled.min_value, optimized.min_value) : optimized.min_value;
  const bool violation = min_i < -opt.tol;

  const auto& term = optimized.strategy.terms().front();
  json report = {{"adversary",
                  {{"witness_id", wf.id},
                   {"samples", opt.samples},
                   {"min_I_samples", opt.samples > 0 ? json(sampled.min_value) : json(nullptr)},
                   {"argmin_sample", sampled.argmin},
                   {"budget", opt.budget},
                   {"optimizer_min", optimized.min_value},
                   {"optimizer_best_restart", optimized.best_restart},
                   {"min_I", min_i},
                   {"violation", violation},
                   {"strategy", {{"M", io::complex_matrix_to_json(term.first)}, {"N", io::complex_matrix_to_json(term.second)}}},
                   {"seed", opt.seed},
                   {"tol", opt.tol}}},
                 {"seed", opt.seed},
                 {"tol", opt.tol}};
  const std::string text = report.dump(2) + "\n";
  if (!opt.out.empty()) write_text(opt.out, text);
  if (opt.format == "csv") {
    out << "witness_id,samples,min_I_samples,budget,optimizer_min,min_I,seed\n"
        << wf.id << ',' << opt.samples << ',' << io::format_number(sampled.min_value) << ',' << opt.budget << ','
        << io::format_number(optimized.min_value) << ',' << io::format_number(min_i) << ',' << opt.seed << '\n';
  } else {
    out << text;
  }
  if (violation) {
    err << "qiw attack: a separable strategy reached I = " << io::format_number(min_i) << " < -" << opt.tol
        << "; this contradicts the LOCC bound and indicates an invalid witness\n";
    return kExitBoundViolation;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  try {
    opt.seed = default_seed();
  } catch (const CommandError& e) {
    err << "qiw: " << e.what() << '\n';
    return e.code();
  }

  CLI::App app{"Bell-like witnesses for quantum-input scenarios", "qiw"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "RNG seed (default 42, or $QIW_SEED)");
    sub->add_option("--tol", opt.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", opt.out, "Output file");
  };

  auto* build = app.add_subcommand("build", "Construct the witness for a scenario");
  build->add_option("--scenario", opt.scenario, "Scenario JSON")->required();
  add_common(build);

  auto* eval = app.add_subcommand("eval", "Evaluate a witness on a scenario's quantum correlations");
  eval->add_option("--scenario", opt.scenario, "Scenario JSON")->required();
  eval->add_option("--witness", opt.witness, "Witness JSON from build")->required();
  add_common(eval);

  auto* attack = app.add_subcommand("attack", "Search separable strategies for a violation");
  attack->add_option("--witness", opt.witness, "Witness JSON from build")->required();
  attack->add_option("--samples", opt.samples, "Random strategies to evaluate");
  attack->add_option("--budget", opt.budget, "Optimizer restarts")->check(CLI::PositiveNumber);
  attack->add_option("--workers", opt.workers, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  add_common(attack);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (build->parsed()) return cmd_build(opt, out);
    if (eval->parsed()) return cmd_eval(opt, out);
    return cmd_attack(opt, out, err);
  } catch (const CommandError& e) {
    err << "qiw: " << e.what() << '\n';
    return e.code();
  } catch (const io::ParseError& e) {
    err << "qiw: parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const NoNegativeEigenvalue& e) {
    err << "qiw: " << e.what() << '\n';
    return kExitNoNegativeEigenvalue;
  } catch (const DimensionError& e) {
    err << "qiw: dimension mismatch: " << e.what() << '\n';
    return kExitDimensionMismatch;
  } catch (const std::exception& e) {
    err << "qiw: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qiw::cli
