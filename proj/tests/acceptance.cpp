// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "irrev/checks.hpp"
#include "irrev/measures.hpp"
#include "irrev/sampling.hpp"
#include "irrev/symstates.hpp"
#include "irrev/uncertainty.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace irrev;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int g_failed = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d  %-34s %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string describe(const checks::CheckResult& r) {
  std::string s = r.name + " worst=" + fmt("%.2e", r.worst);
  if (!r.passed) s += " witness: " + r.witness;
  return s;
}

// ---------------------------------------------------------------------------
// Local descent on the uncertainty deficit, used to push random candidates
// onto the nearest minimizer of the entropic relation.

CVector from_real(const gsl_vector* x, std::size_t d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
  for (std::size_t l = 0; l < d; ++l)
    v(static_cast<Eigen::Index>(l)) = cplx(gsl_vector_get(x, 2 * l), gsl_vector_get(x, 2 * l + 1));
  return CVector(v / v.norm());
}

double deficit_at(const gsl_vector* x, void* p) {
  const std::size_t d = *static_cast<std::size_t*>(p);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
  for (std::size_t l = 0; l < d; ++l)
    v(static_cast<Eigen::Index>(l)) = cplx(gsl_vector_get(x, 2 * l), gsl_vector_get(x, 2 * l + 1));
  const double n = v.norm();
  if (!(n > 1e-12)) return 1e3;
  return ur_report(CVector(v / n)).deficit;
}

CVector descend(const CVector& c0) {
  std::size_t d = c0.dim();
  const std::size_t n = 2 * d;
  gsl_multimin_function fn{&deficit_at, n, &d};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  for (std::size_t l = 0; l < d; ++l) {
    gsl_vector_set(x, 2 * l, c0[l].real());
    gsl_vector_set(x, 2 * l + 1, c0[l].imag());
  }
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  double size = 0.05;
  for (int round = 0; round < 8; ++round) {
    gsl_vector_set_all(step, size);
    gsl_multimin_fminimizer_set(m, &fn, x, step);
    for (int it = 0; it < 20000; ++it) {
      if (gsl_multimin_fminimizer_iterate(m)) break;
      if (gsl_multimin_fminimizer_size(m) < 1e-13) break;
    }
    gsl_vector_memcpy(x, gsl_multimin_fminimizer_x(m));
    size *= 0.2;
  }
  CVector out = from_real(x, d);
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return out;
}

double profile_distance(const std::vector<double>& p, const std::vector<std::vector<double>>& profiles) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : profiles) {
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q[i]));
    best = std::min(best, m);
  }
  return best;
}

// ---------------------------------------------------------------------------

void criteria_1_2() {
  const auto t0 = Clock::now();
  const auto ent = checks::entropic_ur(2, 16, 1000, 101, 1e-9);
  const double t_ent = seconds_since(t0);
  report(1, "entropic uncertainty relation", ent.passed && t_ent < 10.0,
         describe(ent) + " time=" + fmt("%.2fs", t_ent) + " (limit 10s)");

  const auto sup = checks::support_ur(2, 16, 1000, 101);
  report(2, "support uncertainty relation", sup.passed, describe(sup));
}

void criterion_3() {
  const auto sound = checks::minimizer_soundness(16, 1e-9);

  Sampler s(303);
  std::size_t raw_hits = 0, refined = 0, violations = 0;
  double worst_dist = 0.0;
  std::string witness;
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto profiles = minimizer_profiles(d);
    std::vector<std::pair<double, CVector>> lowest;
    std::vector<CVector> candidates;
    for (int i = 0; i < 100000; ++i) {
      auto c = s.haar_vector(d);
      const double def = ur_report(c).deficit;
      if (def < 1e-3) {
        ++raw_hits;
        candidates.push_back(c);
      }
      lowest.emplace_back(def, std::move(c));
      if (lowest.size() > 64) {
        std::nth_element(lowest.begin(), lowest.begin() + 16, lowest.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        lowest.resize(16);
      }
    }
    std::sort(lowest.begin(), lowest.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < std::min<std::size_t>(16, lowest.size()); ++i) candidates.push_back(lowest[i].second);

    for (const auto& c : candidates) {
      const auto r = descend(c);
      const double def = ur_report(r).deficit;
      if (!(def < 1e-3)) continue;
      ++refined;
      const double dist = profile_distance(modulus_squared(r), profiles);
      worst_dist = std::max(worst_dist, dist);
      if (dist > 1e-6) {
        if (!violations) witness = " witness d=" + std::to_string(d) + " deficit=" + fmt("%.3e", def);
        ++violations;
      }
    }
  }
  report(3, "minimizer completeness/soundness", sound.passed && violations == 0,
         describe(sound) + "; search: raw<1e-3=" + std::to_string(raw_hits) + " refined=" + std::to_string(refined) +
             " off-profile=" + std::to_string(violations) + " max_dist=" + fmt("%.2e", worst_dist) + witness);
}

void criterion_4() {
  const auto r = checks::pure_entanglement_identity(8, 100, 404, 1e-9);
  report(4, "pure-state entanglement identity", r.passed, describe(r));
}

void criterion_5() {
  const auto r = checks::twirl_contract(8, 40, 505, 1e-10);
  report(5, "twirl contract", r.passed, describe(r));
}

void criterion_6() {
  const auto eq = checks::eb_equivalence(8, 1e-10);
  const auto ppt = checks::eb_choi_ppt(8, 1e-10);
  report(6, "entanglement-breaking map", eq.passed && ppt.passed, describe(eq) + "; " + describe(ppt));
}

void criterion_7() {
  const OptimizerConfig cfg{};
  const auto ch = checks::chain(2, 5, 200, cfg, 707);
  const auto eq = checks::equality_certification(2, 8, cfg);
  const auto sg = checks::strict_gap(cfg);
  report(7, "chain of (in)equalities", ch.passed && eq.passed && sg.passed,
         describe(ch) + "; " + describe(eq) + "; " + describe(sg));
}

// Relative gap at nu = 0.01 and 0.99, gap at the endpoints.
bool sweep_properties(std::size_t d, const std::vector<GapPoint>& pts, std::string& detail) {
  auto at = [&](double nu) -> const GapPoint& {
    return *std::min_element(pts.begin(), pts.end(),
                             [&](const auto& a, const auto& b) { return std::abs(a.nu - nu) < std::abs(b.nu - nu); });
  };
  const auto& lo = at(0.01);
  const auto& hi = at(0.99);
  const auto& one = pts.back();
  const auto& zero = pts.front();
  const bool ok_lo = lo.relative_gap > 0.9;
  const bool ok_hi = hi.relative_gap < 0.1;
  const bool ok_one = std::abs(one.gap) < 1e-12;
  const bool ok_zero = std::abs(zero.gap) < 1e-9 && std::abs(zero.co_epsilon) < 1e-9;
  detail += "d=" + std::to_string(d) + ": rel(0.01)=" + fmt("%.4f", lo.relative_gap) + (ok_lo ? "" : "[>0.9 not met]") +
            " rel(0.99)=" + fmt("%.4f", hi.relative_gap) + (ok_hi ? "" : "[<0.1 not met]") +
            " gap(1)=" + fmt("%.1e", one.gap) + " gap(0)=" + fmt("%.1e", zero.gap);
  return ok_lo && ok_hi && ok_one && ok_zero;
}

std::vector<double> sweep_grid() {
  // 198 evenly spaced points plus the two probe points, 200 in total.
  auto g = linspace(0.0, 1.0, 198);
  g.push_back(0.01);
  g.push_back(0.99);
  std::sort(g.begin(), g.end());
  return g;
}

void criterion_8() {
  const auto grid = sweep_grid();
  OptimizerConfig cfg;
  cfg.threads = 0;
  std::string detail;

  auto t0 = Clock::now();
  const auto p2 = gap_sweep(2, grid, cfg);
  const double t2 = seconds_since(t0);
  bool ok = sweep_properties(2, p2, detail) && t2 < 60.0;
  detail += " time=" + fmt("%.1fs", t2) + "; ";

  t0 = Clock::now();
  const auto p10 = gap_sweep(10, grid, cfg);
  const double t10 = seconds_since(t0);
  ok = sweep_properties(10, p10, detail) && t10 < 600.0 && ok;
  detail += " time=" + fmt("%.1fs", t10);
  report(8, "gap curve along lambda(nu)", ok, detail);
}

void criterion_9() {
  double worst = 0.0;
  std::size_t cases = 0;
  std::string witness;
  for (std::size_t d : {4u, 6u})
    for (std::size_t d1 : divisors(d))
      for (std::size_t gamma = 0; gamma < d1; ++gamma)
        for (std::size_t beta = 0; beta < d / d1; ++beta) {
          const auto r = reversible_decomposition(d, d1, static_cast<long long>(gamma), static_cast<long long>(beta));
          ++cases;
          if (r.trace_distance >= 1e-9 && witness.empty())
            witness = " witness d=" + std::to_string(d) + " d1=" + std::to_string(d1);
          worst = std::max(worst, r.trace_distance);
        }
  report(9, "reversible-case decomposition", worst < 1e-9,
         "cases=" + std::to_string(cases) + " worst_trace_distance=" + fmt("%.2e", worst) + witness);
}

void criterion_10() {
  const OptimizerConfig cfg{};
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_iso = 0.0;
  bool ok = true;
  for (std::size_t d : {2u, 3u})
    for (double nu : linspace(0.0, 1.0, 50)) {
      const auto lam = lambda_nu(nu, d);
      const double eps = epsilon_min(lam, cfg).value;
      const auto rep = phi_nu(nu, d);
      const double excess = eps - rep.entanglement;
      worst_excess = std::max(worst_excess, excess);
      ok = ok && excess <= 1e-6;

      const double f = nu + (1.0 - nu) / static_cast<double>(d);
      const double iso = max_abs_diff(twirl_isotropic(rho_lambda(lam, BasisConvention::Column)), isotropic_state(f, d));
      worst_iso = std::max(worst_iso, iso);
      ok = ok && iso <= 1e-10;
    }
  report(10, "isotropic consistency", ok,
         "max(eps - E(phi_nu))=" + fmt("%.3e", worst_excess) + " max_isotropic_diff=" + fmt("%.2e", worst_iso));
}

}  // namespace

int main() {
  gsl_set_error_handler_off();
  const auto t0 = Clock::now();
  criteria_1_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d criteria failed, total time %.1fs\n", g_failed, seconds_since(t0));
  return g_failed ? 1 : 0;
}
