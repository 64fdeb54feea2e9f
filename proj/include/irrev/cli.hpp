// cli.hpp
// Subcommands of the `irrev` tool. Data goes to the output stream (or the
// --out file); diagnostics go to the error stream.
//
// Exit codes: 0 success, 1 failed verification, 2 usage or input error.

#pragma once

#include "irrev/checks.hpp"
#include "irrev/measures.hpp"
#include "irrev/qcore.hpp"
#include "irrev/symstates.hpp"
#include "irrev/uncertainty.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace irrev::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

inline const char* const kSweepCsvHeader = "nu,f,ed_plus_bits,epsilon_bits,co_epsilon_bits,gap_bits,relative_gap";
inline const char* const kMinimizerCsvHeader = "d1,d2,beta,gamma,amplitudes,lambda,deficit_bits";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, scientific.
inline std::string fmt_num(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

/// Comma-separated decimals; the values must already sum to 1 within 1e-9.
inline ProbVector parse_lambda(std::string_view text, std::size_t d) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
      throw UsageError("--lambda: cannot parse '" + std::string(tok) + "' as a decimal");
    vals.push_back(v);
    pos = end + 1;
  }
  if (vals.size() != d)
    throw UsageError("--lambda has " + std::to_string(vals.size()) + " entries but --d is " + std::to_string(d));
  try {
    return ProbVector(std::move(vals));
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--lambda: ") + e.what() + " (values are not renormalized)");
  }
}

inline BasisConvention parse_convention(const std::string& s) {
  if (s == "column") return BasisConvention::Column;
  if (s == "row") return BasisConvention::Row;
  throw UsageError("--convention must be column or row");
}

inline std::string convention_name(BasisConvention c) { return c == BasisConvention::Column ? "column" : "row"; }

inline void emit(const std::string& payload, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << payload;
  if (!f) throw UsageError("failed writing output file '" + path + "'");
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::size_t d = 2;
  double nu_min = 0.0;
  double nu_max = 1.0;
  std::size_t steps = 200;
  std::uint64_t seed = OptimizerConfig{}.seed;
  int restarts = OptimizerConfig{}.restarts;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";
};

inline std::string render_sweep_csv(const std::vector<GapPoint>& pts) {
  std::string s = std::string(kSweepCsvHeader) + "\n";
  for (const auto& g : pts) {
    s += fmt_num(g.nu) + ',' + fmt_num(g.f) + ',' + fmt_num(g.ed_plus) + ',' + fmt_num(g.epsilon) + ',' +
         fmt_num(g.co_epsilon) + ',' + fmt_num(g.gap) + ',' + fmt_num(g.relative_gap) + '\n';
  }
  return s;
}

inline std::string render_sweep_json(std::size_t d, const std::vector<GapPoint>& pts) {
  nlohmann::ordered_json j;
  j["d"] = d;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& g : pts)
    j["points"].push_back({{"nu", g.nu},
                           {"f", g.f},
                           {"ed_plus", g.ed_plus},
                           {"epsilon", g.epsilon},
                           {"co_epsilon", g.co_epsilon},
                           {"gap", g.gap},
                           {"relative_gap", g.relative_gap}});
  return j.dump(2) + "\n";
}

inline int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.d < 1) throw UsageError("--d must be >= 1");
  if (!(a.nu_min >= 0.0 && a.nu_max <= 1.0 && a.nu_min < a.nu_max))
    throw UsageError("need 0 <= --nu-min < --nu-max <= 1");
  if (a.steps < 2) throw UsageError("--steps must be >= 2");
  if (a.restarts < 1) throw UsageError("--restarts must be >= 1");
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");

  OptimizerConfig cfg;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  cfg.threads = a.threads;
  const auto grid = linspace(a.nu_min, a.nu_max, a.steps);
  const auto pts = gap_sweep(a.d, grid, cfg);
  emit(a.format == "csv" ? render_sweep_csv(pts) : render_sweep_json(a.d, pts), a.out, out);
  err << "sweep: d=" << a.d << " points=" << pts.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline std::string render_minimizers_csv(std::size_t d) {
  std::string s = std::string(kMinimizerCsvHeader) + "\n";
  for (const auto& m : enumerate_minimizers(d)) {
    std::string amps, lam;
    for (std::size_t l = 0; l < d; ++l) {
      if (l) {
        amps += ';';
        lam += ';';
      }
      amps += fmt_num(m.c[l].real()) + ':' + fmt_num(m.c[l].imag());
      lam += fmt_num(std::norm(m.c[l]));
    }
    s += std::to_string(m.spec.d1) + ',' + std::to_string(m.spec.d2) + ',' + std::to_string(m.spec.beta) + ',' +
         std::to_string(m.spec.gamma) + ',' + amps + ',' + lam + ',' + fmt_num(ur_report(m.c).deficit) + '\n';
  }
  return s;
}

inline std::string render_minimizers_json(std::size_t d) {
  nlohmann::ordered_json j;
  j["d"] = d;
  j["minimizers"] = nlohmann::ordered_json::array();
  for (const auto& m : enumerate_minimizers(d)) {
    nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = re, lam = re;
    for (std::size_t l = 0; l < d; ++l) {
      re.push_back(m.c[l].real());
      im.push_back(m.c[l].imag());
      lam.push_back(std::norm(m.c[l]));
    }
    j["minimizers"].push_back({{"d1", m.spec.d1},
                               {"d2", m.spec.d2},
                               {"beta", m.spec.beta},
                               {"gamma", m.spec.gamma},
                               {"re", re},
                               {"im", im},
                               {"lambda", lam},
                               {"deficit_bits", ur_report(m.c).deficit}});
  }
  j["distinct_lambda_profiles"] = minimizer_profiles(d).size();
  return j.dump(2) + "\n";
}

inline int cmd_minimizers(std::size_t d, const std::string& format, const std::string& path, std::ostream& out,
                          std::ostream& err) {
  if (d < 1) throw UsageError("--d must be >= 1");
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
  emit(format == "csv" ? render_minimizers_csv(d) : render_minimizers_json(d), path, out);
  err << "minimizers: d=" << d << " vectors=" << enumerate_minimizers(d).size()
      << " distinct_lambda_profiles=" << minimizer_profiles(d).size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GapArgs {
  std::size_t d = 2;
  std::string lambda;
  std::string convention = "column";
  std::uint64_t seed = OptimizerConfig{}.seed;
  int restarts = OptimizerConfig{}.restarts;
  double tol = 1e-6;
};

/// E_D^+, epsilon with its phases, their difference, and the minimizer
/// verdict for the optimal amplitude vector c_l = sqrt(lambda_l) e^{i theta_l}.
inline int cmd_gap(const GapArgs& a, std::ostream& out, std::ostream& err) {
  const auto conv = parse_convention(a.convention);
  const auto lam = parse_lambda(a.lambda, a.d);
  if (a.restarts < 1) throw UsageError("--restarts must be >= 1");
  OptimizerConfig cfg;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  const auto eps = epsilon_min(lam, cfg);
  const double ed = ed_plus(lam);

  Eigen::VectorXcd c(static_cast<Eigen::Index>(a.d));
  for (std::size_t l = 0; l < a.d; ++l)
    c(static_cast<Eigen::Index>(l)) = std::polar(std::sqrt(lam[l]), eps.optimizer_phases[l]);
  const auto verdict = is_minimizer(CVector(c), a.tol);

  nlohmann::ordered_json j;
  j["d"] = a.d;
  j["convention"] = convention_name(conv);
  j["lambda"] = lam.vec();
  j["ed_plus_bits"] = ed;
  j["epsilon_bits"] = eps.value;
  j["epsilon_phases"] = eps.optimizer_phases;
  j["gap_bits"] = eps.value - ed;
  j["ur_deficit_bits"] = verdict.deficit;
  j["is_minimizer"] = verdict.is_minimizer;
  if (verdict.spec)
    j["minimizer_spec"] = {{"d1", verdict.spec->d1}, {"d2", verdict.spec->d2}, {"beta", verdict.spec->beta},
                           {"gamma", verdict.spec->gamma}};
  else
    j["minimizer_spec"] = nullptr;
  j["converged"] = eps.converged;
  out << j.dump(2) << "\n";
  if (!eps.converged) err << "gap: optimizer did not reach the step tolerance; value is the best found\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct StateArgs {
  std::size_t d = 2;
  std::string lambda;
  std::string convention = "column";
  std::string show = "eigs";
};

inline nlohmann::ordered_json matrix_json(const CMatrix& m) {
  nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    std::vector<double> r(m.dim()), c(m.dim());
    for (std::size_t k = 0; k < m.dim(); ++k) {
      r[k] = m(i, k).real();
      c[k] = m(i, k).imag();
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"re", re}, {"im", im}};
}

inline int cmd_state(const StateArgs& a, std::ostream& out, std::ostream&) {
  const auto conv = parse_convention(a.convention);
  const auto lam = parse_lambda(a.lambda, a.d);
  const auto rho = rho_lambda(lam, conv);

  nlohmann::ordered_json j;
  j["d"] = a.d;
  j["convention"] = convention_name(conv);
  j["lambda"] = lam.vec();
  j["show"] = a.show;
  if (a.show == "eigs") {
    j["eigenvalues"] = herm_eigvals(rho);
  } else if (a.show == "ptrace") {
    const auto red = partial_trace(rho, Subsystem::A);
    j["reduced_A"] = matrix_json(red);
    j["eigenvalues"] = herm_eigvals(red);
  } else if (a.show == "ptranspose") {
    const auto ev = herm_eigvals(partial_transpose(rho, Subsystem::B));
    j["eigenvalues"] = ev;
    j["min_eigenvalue"] = ev.front();
    j["ppt"] = ev.front() >= -kEigenDustTol;
  } else if (a.show == "twirl") {
    const auto tw = twirl_G(rho);
    j["bell_diagonal"] = bell_diagonal(tw);
    j["fixed_point_error"] = max_abs_diff(tw, rho);
  } else {
    throw UsageError("--show must be one of eigs, ptrace, ptranspose, twirl");
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::size_t d_max = 6;
  int samples = 20;
  std::uint64_t seed = 7;
  double tol = kAssertTol;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.samples < 1) throw UsageError("--samples must be >= 1");
  if (a.d_max < 2) throw UsageError("--d-max must be >= 2");
  if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");

  checks::SuiteConfig cfg;
  cfg.d_max = a.d_max;
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.tol = a.tol;
  const auto results = checks::run_all(cfg);

  int failed = 0;
  for (const auto& r : results) {
    char worst[32];
    std::snprintf(worst, sizeof worst, "%.3e", r.worst);
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  worst=" << worst;
    if (!r.passed) {
      out << "  witness: " << r.witness;
      ++failed;
    }
    out << "\n";
  }
  out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " invariants passed\n";
  if (failed) err << "verify: " << failed << " invariant(s) failed\n";
  return failed ? kExitFailed : kExitOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement cost vs. PPT-distillable entanglement for symmetric Bell-diagonal qudit states"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* sc = app.add_subcommand("sweep", "Gap curve along lambda(nu); CSV or JSON");
  sc->add_option("--d", sweep.d, "Local dimension")->required();
  sc->add_option("--nu-min", sweep.nu_min, "First nu")->capture_default_str();
  sc->add_option("--nu-max", sweep.nu_max, "Last nu")->capture_default_str();
  sc->add_option("--steps", sweep.steps, "Number of grid points (inclusive)")->capture_default_str();
  sc->add_option("--seed", sweep.seed, "Optimizer seed")->capture_default_str();
  sc->add_option("--restarts", sweep.restarts, "Optimizer restarts per point")->capture_default_str();
  sc->add_option("--threads", sweep.threads, "Worker threads, 0 = all cores")->capture_default_str();
  sc->add_option("--out", sweep.out, "Output path (default stdout)");
  sc->add_option("--format", sweep.format, "csv or json")->capture_default_str();

  std::size_t min_d = 2;
  std::string min_format = "csv", min_out;
  auto* mc = app.add_subcommand("minimizers", "Enumerate minimal-uncertainty vectors");
  mc->add_option("--d", min_d, "Dimension")->required();
  mc->add_option("--format", min_format, "csv or json")->capture_default_str();
  mc->add_option("--out", min_out, "Output path (default stdout)");

  GapArgs gap;
  auto* gc = app.add_subcommand("gap", "E_D^+, epsilon and their difference for one lambda");
  gc->add_option("--d", gap.d, "Dimension")->required();
  gc->add_option("--lambda", gap.lambda, "Comma-separated probabilities")->required();
  gc->add_option("--convention", gap.convention, "column or row")->capture_default_str();
  gc->add_option("--seed", gap.seed, "Optimizer seed")->capture_default_str();
  gc->add_option("--restarts", gap.restarts, "Optimizer restarts")->capture_default_str();
  gc->add_option("--tol", gap.tol, "Deficit tolerance for the minimizer verdict")->capture_default_str();

  VerifyArgs ver;
  auto* vc = app.add_subcommand("verify", "Run the invariant suite");
  vc->add_option("--d-max", ver.d_max, "Largest dimension")->capture_default_str();
  vc->add_option("--samples", ver.samples, "Random samples per dimension")->capture_default_str();
  vc->add_option("--seed", ver.seed, "Sampling seed")->capture_default_str();
  vc->add_option("--tol", ver.tol, "Assertion tolerance")->capture_default_str();

  StateArgs st;
  auto* stc = app.add_subcommand("state", "Inspect rho_lambda");
  stc->add_option("--d", st.d, "Dimension")->required();
  stc->add_option("--lambda", st.lambda, "Comma-separated probabilities")->required();
  stc->add_option("--convention", st.convention, "column or row")->capture_default_str();
  stc->add_option("--show", st.show, "eigs, ptrace, ptranspose or twirl")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sc) return cmd_sweep(sweep, out, err);
    if (*mc) return cmd_minimizers(min_d, min_format, min_out, out, err);
    if (*gc) return cmd_gap(gap, out, err);
    if (*vc) return cmd_verify(ver, out, err);
    if (*stc) return cmd_state(st, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"irrev"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace irrev::cli
