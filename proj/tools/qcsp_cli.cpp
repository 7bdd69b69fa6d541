// Copyright 2026 The qcsp-clock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qcsp: compile, decide, oracle, reduce, verify-gadgets, corpus.
//
// Exit codes: 0 accept / frustration-free / all checks hold, 1 reject /
// frustrated / a check failed, 2 indeterminate, 3 input error, 4 dimension
// cap exceeded, 5 internal error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qcsp/compiler.hpp"
#include "qcsp/corpus.hpp"
#include "qcsp/decider.hpp"
#include "qcsp/operator.hpp"
#include "qcsp/reduction.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qcsp;

constexpr int kExitInput = 3;
constexpr int kExitCap = 4;
constexpr int kExitInternal = 5;

struct RunConfig {
  std::string subcommand;
  std::string input = "-";
  std::string output = "-";
  std::string format;  // json | human; empty picks the subcommand default
  std::string mode = "exact";
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  double ff_below = kFrustrationFreeBelow;
  double frustrated_above = kFrustratedAbove;
  double eigen_tol = 1e-10;
  std::uint64_t dim_cap = std::uint64_t(1) << 22;
  std::uint64_t dense_cap = 1024;
  std::uint64_t lifted_cap = 4096;
  int max_qubits = 24;
  int threads = 1;
  // subcommand flags
  std::string proof;
  bool has_proof = false;
  std::string variant;
  bool no_split = false;
  bool backward = false;
  bool check = false;
  bool inject_bug = false;
  bool list_only = false;
  int t2_max_n = 4;
};

json config_json(const RunConfig &c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["input"] = c.input;
  j["mode"] = c.mode;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["ff_below"] = c.ff_below;
  j["frustrated_above"] = c.frustrated_above;
  j["eigen_tol"] = c.eigen_tol;
  j["dim_cap"] = c.dim_cap;
  j["dense_cap"] = c.dense_cap;
  j["lifted_cap"] = c.lifted_cap;
  j["max_qubits"] = c.max_qubits;
  j["threads"] = c.threads;
  if (c.subcommand == "decide") j["proof"] = c.has_proof ? json(c.proof) : json(nullptr);
  if (c.subcommand == "oracle") j["split"] = !c.no_split;
  if (c.subcommand == "reduce") {
    j["backward"] = c.backward;
    j["check"] = c.check;
  }
  if (c.subcommand == "corpus") j["inject_bug"] = c.inject_bug;
  if (c.subcommand == "verify-gadgets") j["t2_max_n"] = c.t2_max_n;
  return j;
}

std::string read_input(const std::string &path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InputError(path, "cannot open file");
    ss << in.rdbuf();
  }
  return ss.str();
}

void write_output(const std::string &path, const std::string &text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(path, "cannot open for writing");
  out << text;
}

EigenOptions eigen_options(const RunConfig &c) {
  EigenOptions e;
  e.tol = c.eigen_tol;
  e.seed = c.seed;
  e.dense_cap = c.dense_cap;
  return e;
}

HamiltonianOptions hamiltonian_options(const RunConfig &c) {
  HamiltonianOptions h;
  h.cap = c.dim_cap;
  return h;
}

int verdict_exit(Satisfiability s) {
  return s == Satisfiability::FrustrationFree ? 0 : s == Satisfiability::Frustrated ? 1 : 2;
}

int decision_exit(Decision d) { return d == Decision::Accept ? 0 : d == Decision::Reject ? 1 : 2; }

char fmt_buf[64];
std::string sci(double v) {
  std::snprintf(fmt_buf, sizeof fmt_buf, "%.6e", v);
  return fmt_buf;
}

// ------------------------------------------------------------------ compile

int cmd_compile(const RunConfig &c) {
  Circuit circ = parse_circuit(read_input(c.input));
  if (!c.variant.empty()) {
    const auto v = parse_variant(c.variant);
    if (!v) throw InputError("--variant", "unknown variant '" + c.variant + "'");
    circ.variant = *v;
    validate_circuit(circ);
  }
  write_output(c.output, serialize_instance(compile(circ)));
  return 0;
}

// ------------------------------------------------------------------- decide

int cmd_decide(const RunConfig &c) {
  const QcspInstance inst = parse_instance(read_input(c.input));
  DecideOptions opt;
  if (c.mode != "exact" && c.mode != "sampled") throw InputError("--mode", "expected exact or sampled");
  opt.mode = c.mode == "exact" ? SimMode::Exact : SimMode::Sampled;
  opt.trials = c.trials;
  opt.seed = c.seed;
  opt.max_qubits = c.max_qubits;
  const AnalysisReport r = decide(inst, c.has_proof ? std::optional<std::string>(c.proof) : std::nullopt, opt);
  if (c.format == "human") {
    std::ostringstream s;
    s << "decision  " << to_string(r.decision) << "\n";
    if (r.reason) s << "reason    " << r.reason->step << " " << r.reason->code << ": " << r.reason->message << "\n";
    s << "path  kind         clocks  events\n";
    for (size_t p = 0; p < r.paths.size(); ++p) {
      std::snprintf(fmt_buf, sizeof fmt_buf, "%-5zu %-12s %-7zu %zu\n", p, std::string(to_string(r.paths[p].kind)).c_str(),
                    r.paths[p].clocks.size(), r.paths[p].events.size());
      s << fmt_buf;
    }
    for (const auto &n : r.notes) s << "note      " << n << "\n";
    write_output(c.output, s.str());
  } else {
    write_output(c.output, report_json(r, config_json(c).dump()) + "\n");
  }
  return decision_exit(r.decision);
}

// ------------------------------------------------------------------- oracle

int cmd_oracle(const RunConfig &c) {
  const QcspInstance inst = parse_instance(read_input(c.input));
  const SpectralResult s = instance_min_eigenvalue(inst, hamiltonian_options(c), eigen_options(c), !c.no_split);
  const Satisfiability v = classify(s.lambda_min, c.ff_below, c.frustrated_above);
  if (c.format == "human") {
    write_output(c.output, "lambda_min  " + sci(s.lambda_min) + "\nverdict     " + std::string(to_string(v)) +
                               "\nmethod      " + s.method + "\n");
  } else {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config_json(c);
    j["lambda_min"] = s.lambda_min;
    j["verdict"] = to_string(v);
    j["method"] = s.method;
    j["iterations"] = s.iterations;
    j["residual_norm"] = s.residual_norm;
    write_output(c.output, j.dump(2) + "\n");
  }
  return verdict_exit(v);
}

// ------------------------------------------------------------------- reduce

QuditCsp read_qudit_source(const std::string &text) {
  json probe;
  try {
    probe = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InputError("/", std::string("syntax error: ") + e.what());
  }
  if (probe.is_object() && probe.contains("d")) return parse_qudit_csp(text);
  return to_qudit_csp(parse_instance(text));
}

int cmd_reduce(const RunConfig &c) {
  const std::string text = read_input(c.input);
  if (c.backward) {
    const BackwardResult b = reduce_backward(parse_qubit_csp(text));
    if (!b.consistent)
      std::cerr << "qcsp: inconsistent collections; emitting the trivially frustrated instance\n";
    write_output(c.output, serialize_qudit_csp(b.instance));
    return 0;
  }
  const QuditCsp src = read_qudit_source(text);
  const QubitCsp q = reduce_forward(src);
  if (!c.check) {
    write_output(c.output, serialize_qubit_csp(q));
    return 0;
  }
  const EigenOptions eo = eigen_options(c);
  const SparseOperator hq = qudit_hamiltonian(src);
  if (hq.space().total_dim() > c.dim_cap) throw CapExceeded(hq.space().total_dim(), c.dim_cap);
  const SpectralResult a = min_eigenvalue(hq, eo);
  const SparseOperator hb = qubit_hamiltonian(q, c.lifted_cap);
  if (hb.space().total_dim() > c.dim_cap) throw CapExceeded(hb.space().total_dim(), c.dim_cap);
  const SpectralResult b = min_eigenvalue(hb, eo);
  const BackwardResult back = reduce_backward(q);
  const Satisfiability va = classify(a.lambda_min, c.ff_below, c.frustrated_above);
  const Satisfiability vb = classify(b.lambda_min, c.ff_below, c.frustrated_above);
  const bool preserved = va == vb && va != Satisfiability::Indeterminate;
  const bool round_trip = back.consistent && same_up_to_renaming(back.instance, src);
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config_json(c);
  j["d"] = src.d;
  j["x"] = q.x;
  j["num_qudits"] = src.num_qudits;
  j["num_qubits"] = q.num_qubits;
  j["qudit"] = {{"lambda_min", a.lambda_min}, {"verdict", to_string(va)}, {"method", a.method}};
  j["qubit"] = {{"lambda_min", b.lambda_min}, {"verdict", to_string(vb)}, {"method", b.method}};
  j["verdict_preserved"] = preserved;
  j["round_trip_identity"] = round_trip;
  write_output(c.output, j.dump(2) + "\n");
  return preserved && round_trip ? 0 : 1;
}

// ----------------------------------------------------------- verify-gadgets

int cmd_verify_gadgets(const RunConfig &c) {
  const EigenOptions eo = eigen_options(c);
  const auto psi = build_psi_states();
  bool orthonormal = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) orthonormal &= inner(psi[i], psi[j]) == Rational(i == j ? 1 : 0);
  const RationalMatrix h = h42_exact();
  const bool idempotent = rational_product(h, h) == h;
  const int h42_kernel = static_cast<int>(kernel_basis(build_h42()).size());
  const PlacementCheckResult sweep = verify_uniqueness_840(eo);
  const bool sweep_ok = sweep.frustration_free.size() == 1 &&
                        sweep.frustration_free.front() == std::array<int, 4>{0, 1, 2, 3} && sweep.indeterminate == 0;
  std::vector<T2CheckResult> t2;
  bool t2_ok = true;
  for (int n = 2; n <= c.t2_max_n; ++n) {
    t2.push_back(verify_t2_placements(n, 6, eo));
    t2_ok &= t2.back().kernel_dim == 1 && t2.back().frustration_free.empty() && t2.back().indeterminate == 0;
  }
  const bool ok = orthonormal && idempotent && h42_kernel == 4 && sweep_ok && t2_ok;

  auto tuple = [](const auto &p) {
    std::string s = "(";
    for (size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
  };
  if (c.format == "json") {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config_json(c);
    j["psi_orthonormal"] = orthonormal;
    j["h42_idempotent"] = idempotent;
    j["h42_kernel_dim"] = h42_kernel;
    json rows = json::array();
    for (const auto &r : sweep.records)
      rows.push_back({{"placement", r.placement}, {"lambda_min", r.lambda_min}, {"verdict", to_string(r.verdict)}});
    j["placements"] = rows;
    j["frustration_free"] = sweep.frustration_free;
    json jt = json::array();
    for (const auto &t : t2) {
      json tr = json::array();
      for (const auto &r : t.records)
        tr.push_back({{"placement", r.placement}, {"lambda_min", r.lambda_min}, {"verdict", to_string(r.verdict)}});
      jt.push_back({{"n", t.n}, {"num_qubits", t.num_qubits}, {"kernel_dim", t.kernel_dim},
                    {"frustration_free", t.frustration_free}, {"placements", tr}});
    }
    j["t2"] = jt;
    j["all_hold"] = ok;
    write_output(c.output, j.dump(2) + "\n");
    return ok ? 0 : 1;
  }
  std::ostringstream s;
  s << "# qcsp verify-gadgets schema " << kReportSchemaVersion << "\n# config " << config_json(c).dump() << "\n";
  s << "psi_orthonormal " << (orthonormal ? "yes" : "no") << "\n";
  s << "h42_idempotent  " << (idempotent ? "yes" : "no") << "\n";
  s << "h42_kernel_dim  " << h42_kernel << "\n";
  s << "gadget placement lambda_min verdict\n";
  for (const auto &r : sweep.records)
    s << "H42 " << tuple(r.placement) << " " << sci(r.lambda_min) << " " << to_string(r.verdict) << "\n";
  for (const auto &t : t2) {
    s << "T2[n=" << t.n << ",q=" << t.num_qubits << "] kernel_dim " << t.kernel_dim << "\n";
    for (const auto &r : t.records)
      s << "T2n" << t.n << " " << tuple(r.placement) << " " << sci(r.lambda_min) << " " << to_string(r.verdict) << "\n";
  }
  s << "summary h42_frustration_free " << sweep.frustration_free.size() << " frustrated " << sweep.frustrated
    << " indeterminate " << sweep.indeterminate << "\n";
  for (const auto &t : t2)
    s << "summary t2 n=" << t.n << " frustration_free " << t.frustration_free.size() << " frustrated " << t.frustrated
      << " indeterminate " << t.indeterminate << "\n";
  s << "all_hold " << (ok ? "yes" : "no") << "\n";
  write_output(c.output, s.str());
  return ok ? 0 : 1;
}

// ------------------------------------------------------------------- corpus

int cmd_corpus(const RunConfig &c) {
  const std::vector<CorpusCase> cases = generate_corpus(c.seed);
  if (c.list_only) {
    std::ostringstream s;
    for (const auto &k : cases) s << k.name << "\n";
    write_output(c.output, s.str());
    return 0;
  }
  CorpusOptions opt;
  opt.seed = c.seed;
  opt.inject_bug = c.inject_bug;
  opt.hamiltonian = hamiltonian_options(c);
  opt.eigen = eigen_options(c);
  opt.ff_below = c.ff_below;
  opt.frustrated_above = c.frustrated_above;
  opt.threads = c.threads;
  const CorpusSummary sum = run_corpus(cases, opt);
  const bool ok = sum.disagree == 0 && sum.oracle_band == 0;
  if (c.format == "human") {
    std::ostringstream s;
    s << "case decision reason lambda_min oracle agree\n";
    for (const auto &o : sum.cases)
      s << o.name << " " << to_string(o.decision) << " " << (o.reason.empty() ? "-" : o.reason) << " "
        << sci(o.lambda_min) << " " << to_string(o.oracle) << " " << (o.agree ? "yes" : "NO") << "\n";
    for (const auto &o : sum.cases)
      if (!o.agree) s << "discrepancy " << o.name << "\n";
    s << "cases " << sum.cases.size() << " agree " << sum.agree << " disagree " << sum.disagree << " band "
      << sum.oracle_band << "\n";
    write_output(c.output, s.str());
  } else {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config_json(c);
    json rows = json::array();
    json bad = json::array();
    for (const auto &o : sum.cases) {
      rows.push_back({{"name", o.name},
                      {"branch", o.branch},
                      {"decision", to_string(o.decision)},
                      {"reason", o.reason},
                      {"proof", o.proof},
                      {"lambda_min", o.lambda_min},
                      {"method", o.method},
                      {"oracle", to_string(o.oracle)},
                      {"agree", o.agree}});
      if (!o.agree) bad.push_back(o.name);
    }
    j["cases"] = rows;
    j["discrepancies"] = bad;
    j["per_branch"] = sum.per_branch;
    j["summary"] = {{"cases", sum.cases.size()}, {"agree", sum.agree}, {"disagree", sum.disagree},
                    {"oracle_band", sum.oracle_band}};
    write_output(c.output, j.dump(2) + "\n");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  RunConfig cfg;
  CLI::App app{"qcsp: clock-construction QCSP compiler, decider and spectral oracle"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  app.add_option("--seed", cfg.seed, "master seed")->envname("QCSP_SEED");
  app.add_option("--format", cfg.format, "json or human")
      ->envname("QCSP_FORMAT")
      ->check(CLI::IsMember({"json", "human"}));
  app.add_option("--ff-below", cfg.ff_below, "frustration-free threshold on lambda_min")->envname("QCSP_FF_BELOW");
  app.add_option("--frustrated-above", cfg.frustrated_above, "frustrated threshold on lambda_min")
      ->envname("QCSP_FRUSTRATED_ABOVE");
  app.add_option("--eigen-tol", cfg.eigen_tol, "Lanczos residual target")->envname("QCSP_EIGEN_TOL");
  app.add_option("--dim-cap", cfg.dim_cap, "largest Hilbert space dimension built")->envname("QCSP_DIM_CAP");
  app.add_option("--dense-cap", cfg.dense_cap, "dense eigensolver up to this dimension")->envname("QCSP_DENSE_CAP");
  app.add_option("--lifted-cap", cfg.lifted_cap, "cap on one lifted reduction clause")->envname("QCSP_LIFTED_CAP");
  app.add_option("--max-qubits", cfg.max_qubits, "decider statevector cap")->envname("QCSP_MAX_QUBITS");
  app.add_option("--threads", cfg.threads, "corpus worker threads")->envname("QCSP_THREADS");

  auto io = [&](CLI::App *s) {
    s->add_option("input", cfg.input, "input file, - for stdin");
    s->add_option("-o,--output", cfg.output, "output file, - for stdout");
  };
  CLI::App *compile_cmd = app.add_subcommand("compile", "circuit file -> instance file");
  io(compile_cmd);
  compile_cmd->add_option("--variant", cfg.variant, "override the circuit's variant");

  CLI::App *decide_cmd = app.add_subcommand("decide", "run the decision procedure");
  io(decide_cmd);
  decide_cmd->add_option("--proof", cfg.proof, "classical proof bits (QCMA)");
  decide_cmd->add_option("--mode", cfg.mode, "exact or sampled")->envname("QCSP_MODE");
  decide_cmd->add_option("--trials", cfg.trials, "sampled-mode trials, 0 for the default budget")
      ->envname("QCSP_TRIALS");

  CLI::App *oracle_cmd = app.add_subcommand("oracle", "minimum eigenvalue of the instance Hamiltonian");
  io(oracle_cmd);
  oracle_cmd->add_flag("--no-split", cfg.no_split, "diagonalize the full space");

  CLI::App *reduce_cmd = app.add_subcommand("reduce", "qudit CSP -> qubit CSP, or back");
  io(reduce_cmd);
  reduce_cmd->add_flag("--backward", cfg.backward, "input is a qubit CSP");
  reduce_cmd->add_flag("--check", cfg.check, "compare oracle verdicts and the round trip");

  CLI::App *gadgets_cmd = app.add_subcommand("verify-gadgets", "gadget checks and the placement sweeps");
  gadgets_cmd->add_option("-o,--output", cfg.output, "output file, - for stdout");
  gadgets_cmd->add_option("--t2-max-n", cfg.t2_max_n, "largest T2 size checked")->check(CLI::Range(2, 6));

  CLI::App *corpus_cmd = app.add_subcommand("corpus", "decider vs oracle on the generated corpus");
  corpus_cmd->add_option("-o,--output", cfg.output, "output file, - for stdout");
  corpus_cmd->add_flag("--inject-bug", cfg.inject_bug, "harness self-test: end-check rejects become accepts");
  corpus_cmd->add_flag("--list", cfg.list_only, "list case names only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.has_proof = decide_cmd->count("--proof") > 0;
  if (cfg.format.empty()) cfg.format = cfg.subcommand == "verify-gadgets" ? "human" : "json";

  try {
    if (cfg.subcommand == "compile") return cmd_compile(cfg);
    if (cfg.subcommand == "decide") return cmd_decide(cfg);
    if (cfg.subcommand == "oracle") return cmd_oracle(cfg);
    if (cfg.subcommand == "reduce") return cmd_reduce(cfg);
    if (cfg.subcommand == "verify-gadgets") return cmd_verify_gadgets(cfg);
    return cmd_corpus(cfg);
  } catch (const InputError &e) {
    std::cerr << "qcsp: input error at " << e.what() << "\n";
    return kExitInput;
  } catch (const CapExceeded &e) {
    std::cerr << "qcsp: required " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception &e) {
    std::cerr << "qcsp: " << e.what() << "\n";
    return kExitInternal;
  }
}
