// checks.hpp
// Named invariant checks over randomized and exhaustive instances. Each check
// returns pass/fail, the worst observed deviation and a witness input for
// the first failure. Used by `irrev verify` and the acceptance suite.

#pragma once

#include "irrev/measures.hpp"
#include "irrev/qcore.hpp"
#include "irrev/sampling.hpp"
#include "irrev/symstates.hpp"
#include "irrev/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace irrev::checks {

struct CheckResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  std::string witness;
};

namespace detail {

inline std::string fmt_vec(std::span<const double> v) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

/// Records a sample; `bad` marks a violation, `dev` feeds the worst-case value.
struct Recorder {
  CheckResult r;
  explicit Recorder(std::string name) { r.name = std::move(name); }
  void record(double dev, bool bad, const std::function<std::string()>& witness) {
    if (std::isnan(dev)) bad = true;
    r.worst = std::max(r.worst, dev);
    if (bad && r.passed) {
      r.passed = false;
      r.witness = witness();
    }
  }
  CheckResult done() { return std::move(r); }
};

inline CVector family_superposition(const CVector& c, BasisConvention conv) {
  const std::size_t d = c.dim();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t l = 0; l < d; ++l) v += c[l] * family_state(l, d, conv).data();
  return CVector(std::move(v), BipartiteDims{d, d});
}

}  // namespace detail

using detail::family_superposition;

// ---------------------------------------------------------------------------
// qcore

inline CheckResult ptrace_of_kron(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("qcore.ptrace_of_kron");
  Sampler s(seed);
  for (std::size_t da = 1; da <= d_max; ++da)
    for (std::size_t db = 1; db <= d_max; ++db)
      for (int i = 0; i < samples; ++i) {
        const auto a = s.complex_matrix(da), b = s.complex_matrix(db);
        const auto expect = b.trace() * a;
        const double err = max_abs_diff(partial_trace(kron(a, b), Subsystem::A), expect);
        rec.record(err, err > tol, [&] { return "dA=" + std::to_string(da) + " dB=" + std::to_string(db); });
      }
  return rec.done();
}

inline CheckResult density_spectra(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("qcore.density_spectra");
  Sampler s(seed);
  for (std::size_t d = 2; d <= d_max; ++d)
    for (int i = 0; i < samples; ++i) {
      const auto lam = s.probability_vector(d);
      for (const auto& rho : {rho_lambda(lam, BasisConvention::Column), rho_lambda(lam, BasisConvention::Row),
                              isotropic_state(s.uniform(), d)}) {
        const auto ev = herm_eigvals(rho);
        double sum = 0.0;
        for (double e : ev) sum += e;
        const double dev = std::max(std::abs(sum - 1.0), -ev.front());
        rec.record(dev, ev.front() < -kEigenDustTol || std::abs(sum - 1.0) > tol,
                   [&] { return "d=" + std::to_string(d) + " lambda=" + detail::fmt_vec(lam.values()); });
      }
    }
  return rec.done();
}

inline CheckResult ptranspose_hermitian_trace(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("qcore.ptranspose_hermitian_trace");
  Sampler s(seed);
  for (std::size_t d = 2; d <= d_max; ++d)
    for (int i = 0; i < samples; ++i) {
      const auto rho = s.density_operator({d, d});
      for (auto side : {Subsystem::A, Subsystem::B}) {
        const auto pt = partial_transpose(rho, side);
        const double dev = std::max(pt.hermiticity_error(), std::abs(pt.trace() - rho.trace()));
        rec.record(dev, dev > tol, [&] { return "d=" + std::to_string(d) + " sample=" + std::to_string(i); });
      }
    }
  return rec.done();
}

// ---------------------------------------------------------------------------
// symstates

inline CheckResult group_commutes(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("symstates.group_commutes");
  Sampler s(seed);
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 6); ++d)
    for (int i = 0; i < std::max(1, samples / 10); ++i) {
      const auto lam = s.probability_vector(d);
      for (auto conv : {BasisConvention::Column, BasisConvention::Row}) {
        const auto rho = rho_lambda(lam, conv);
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) {
            const auto g = symmetry_element(a, b, d);
            const double err = max_abs_diff(g * rho, rho * g);
            rec.record(err, err > tol, [&] {
              return "d=" + std::to_string(d) + " g=(" + std::to_string(a) + "," + std::to_string(b) + ")";
            });
          }
      }
    }
  return rec.done();
}

/// twirl_G(|phi><phi|) = rho_{|c|^2} for phi = sum c_l Psi_l, plus
/// idempotence and trace preservation on random operators.
inline CheckResult twirl_contract(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("symstates.twirl_contract");
  Sampler s(seed);
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 8); ++d)
    for (int i = 0; i < samples; ++i) {
      const auto c = s.haar_vector(d);
      const auto conv = i % 2 ? BasisConvention::Row : BasisConvention::Column;
      const auto phi = family_superposition(c, conv);
      const auto tw = twirl_G(CMatrix::projector(phi));
      const auto expect = rho_lambda(ProbVector(modulus_squared(c)), conv);
      double err = max_abs_diff(tw, expect);

      const auto x = s.density_operator({d, d});
      const auto tx = twirl_G(x);
      err = std::max(err, max_abs_diff(twirl_G(tx), tx));
      err = std::max(err, std::abs(tx.trace() - x.trace()));
      rec.record(err, err > tol, [&] { return "d=" + std::to_string(d) + " sample=" + std::to_string(i); });
    }
  return rec.done();
}

inline CheckResult twirl_positivity(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("symstates.twirl_positivity");
  Sampler s(seed);
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 6); ++d)
    for (int i = 0; i < samples; ++i) {
      const auto x = s.density_operator({d, d});
      const auto tx = twirl_G(x);
      const double mn = min_eigval(tx);
      const double dev = std::max(std::abs(tx.trace() - 1.0), -mn);
      rec.record(dev, std::abs(tx.trace() - 1.0) > tol || mn < -kEigenDustTol,
                 [&] { return "d=" + std::to_string(d) + " sample=" + std::to_string(i); });
    }
  return rec.done();
}

namespace detail {
inline void simplex_grid(std::size_t d, std::size_t n, std::vector<std::size_t>& cur, std::size_t left,
                         const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (cur.size() + 1 == d) {
    cur.push_back(left);
    fn(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t k = 0; k <= left; ++k) {
    cur.push_back(k);
    simplex_grid(d, n, cur, left - k, fn);
    cur.pop_back();
  }
}
}  // namespace detail

/// Every non-uniform lambda on a simplex grid gives an NPT rho_lambda.
inline CheckResult npt_off_uniform(std::size_t d_max, std::size_t resolution = 4) {
  detail::Recorder rec("symstates.npt_off_uniform");
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 6); ++d) {
    std::vector<std::size_t> cur;
    detail::simplex_grid(d, resolution, cur, resolution, [&](const std::vector<std::size_t>& k) {
      std::vector<double> p(d);
      bool uniform = true;
      for (std::size_t l = 0; l < d; ++l) {
        p[l] = static_cast<double>(k[l]) / static_cast<double>(resolution);
        uniform = uniform && k[l] * d == resolution;
      }
      if (uniform) return;
      const ProbVector lam(p);
      const double mn = min_eigval(partial_transpose(rho_lambda(lam, BasisConvention::Column), Subsystem::B));
      rec.record(std::max(0.0, mn), mn >= -kEigenDustTol, [&] { return "d=" + std::to_string(d) + " lambda=" + detail::fmt_vec(p); });
    });
  }
  return rec.done();
}

inline CheckResult eb_isometry_support(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("symstates.eb_isometry_support");
  Sampler s(seed);
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 8); ++d) {
    const auto m = eb_map(d);
    const Eigen::MatrixXcd vtv = m.isometry.adjoint() * m.isometry;
    const Eigen::MatrixXcd proj = m.isometry * m.isometry.adjoint();
    double err = (vtv - Eigen::MatrixXcd::Identity(vtv.rows(), vtv.cols())).cwiseAbs().maxCoeff();
    for (int i = 0; i < std::max(1, samples / 10); ++i) {
      const auto rho = rho_lambda(s.probability_vector(d), BasisConvention::Column);
      err = std::max(err, (proj * rho.data() * proj - rho.data()).cwiseAbs().maxCoeff());
    }
    rec.record(err, err > tol, [&] { return "d=" + std::to_string(d); });
  }
  return rec.done();
}

/// tr_B(V X V^*) against the measure-and-prepare form on every matrix unit.
inline CheckResult eb_equivalence(std::size_t d_max, double tol) {
  detail::Recorder rec("symstates.eb_equivalence");
  for (std::size_t d = 1; d <= std::min<std::size_t>(d_max, 8); ++d) {
    const auto m = eb_map(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        auto unit = CMatrix::zero(d);
        unit(i, j) = 1.0;
        const double err = max_abs_diff(eb_apply(m, unit), eb_apply_via_isometry(m, unit));
        rec.record(err, err > tol, [&] {
          return "d=" + std::to_string(d) + " unit=(" + std::to_string(i) + "," + std::to_string(j) + ")";
        });
      }
  }
  return rec.done();
}

inline CheckResult eb_choi_ppt(std::size_t d_max, double tol) {
  detail::Recorder rec("symstates.eb_choi_ppt");
  for (std::size_t d = 1; d <= std::min<std::size_t>(d_max, 8); ++d) {
    const double mn = min_eigval(partial_transpose(eb_choi(eb_map(d)), Subsystem::B));
    rec.record(std::max(0.0, -mn), mn < -tol, [&] { return "d=" + std::to_string(d); });
  }
  return rec.done();
}

inline CheckResult reversible_split(std::span<const std::size_t> dims, double tol) {
  detail::Recorder rec("symstates.reversible_decomposition");
  for (std::size_t d : dims)
    for (std::size_t d1 : divisors(d))
      for (std::size_t gamma = 0; gamma < d1; ++gamma) {
        const auto r = reversible_decomposition(d, d1, static_cast<long long>(gamma), 0, tol);
        rec.record(r.trace_distance, r.trace_distance >= tol, [&] {
          return "d=" + std::to_string(d) + " d1=" + std::to_string(d1) + " gamma=" + std::to_string(gamma);
        });
      }
  return rec.done();
}

// ---------------------------------------------------------------------------
// uncertainty

inline CheckResult entropic_ur(std::size_t d_lo, std::size_t d_hi, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("uncertainty.entropic_ur");
  Sampler s(seed);
  for (std::size_t d = d_lo; d <= d_hi; ++d)
    for (int i = 0; i < samples; ++i) {
      const auto c = s.haar_vector(d);
      const auto r = ur_report(c);
      rec.record(std::max(0.0, -r.deficit), r.deficit < -tol,
                 [&] { return "d=" + std::to_string(d) + " deficit=" + std::to_string(r.deficit); });
    }
  return rec.done();
}

inline CheckResult support_ur(std::size_t d_lo, std::size_t d_hi, int samples, std::uint64_t seed) {
  detail::Recorder rec("uncertainty.support_ur");
  Sampler s(seed);
  for (std::size_t d = d_lo; d <= d_hi; ++d)
    for (int i = 0; i < samples; ++i) {
      const auto r = ur_report(s.haar_vector(d));
      rec.record(0.0, r.support_c * r.support_chat < d, [&] {
        return "d=" + std::to_string(d) + " supports=" + std::to_string(r.support_c) + "x" + std::to_string(r.support_chat);
      });
    }
  // Sparse vectors stress the inequality where it can bind.
  for (std::size_t d = d_lo; d <= d_hi; ++d)
    for (const auto& m : enumerate_minimizers(d)) {
      const auto r = ur_report(m.c);
      rec.record(0.0, r.support_c * r.support_chat != d, [&] { return "minimizer d=" + std::to_string(d); });
    }
  return rec.done();
}

/// Every enumerated vector saturates both relations; its DFT is again a
/// minimizer; the count before any profile dedup is sum_{d1 | d} d.
inline CheckResult minimizer_soundness(std::size_t d_max, double tol) {
  detail::Recorder rec("uncertainty.minimizer_soundness");
  for (std::size_t d = 1; d <= d_max; ++d) {
    const auto mins = enumerate_minimizers(d);
    const std::size_t expect = d * divisors(d).size();
    rec.record(0.0, mins.size() != expect, [&] {
      return "d=" + std::to_string(d) + " count=" + std::to_string(mins.size()) + " expected=" + std::to_string(expect);
    });
    for (const auto& m : mins) {
      const auto r = ur_report(m.c);
      const auto closure = is_minimizer(dft(m.c), tol);
      const auto self = is_minimizer(m.c, tol);
      const bool bad = std::abs(r.deficit) >= tol || r.support_c * r.support_chat != d || !closure.is_minimizer ||
                       !self.spec || !(*self.spec == m.spec);
      rec.record(std::abs(r.deficit), bad, [&] {
        return "d=" + std::to_string(d) + " (d1,beta,gamma)=(" + std::to_string(m.spec.d1) + "," +
               std::to_string(m.spec.beta) + "," + std::to_string(m.spec.gamma) + ")";
      });
    }
  }
  return rec.done();
}

/// Small perturbations of a minimizer leave the minimal set. A support
/// component is rephased by 1e-2; point masses get a 1e-2 off-support
/// admixture instead (rephasing a lone component is a global phase).
inline CheckResult perturbation_rigidity(std::size_t d_max, std::uint64_t seed) {
  detail::Recorder rec("uncertainty.perturbation_rigidity");
  Sampler s(seed);
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 8); ++d)
    for (const auto& m : enumerate_minimizers(d)) {
      CVector c = m.c;
      std::vector<std::size_t> supp, off;
      for (std::size_t l = 0; l < d; ++l) (std::abs(c[l]) > 0.0 ? supp : off).push_back(l);
      const double sign = s.uniform() < 0.5 ? -1.0 : 1.0;
      if (supp.size() > 1) {
        const std::size_t l = supp[1 + static_cast<std::size_t>(s.uniform() * static_cast<double>(supp.size() - 1))];
        c[l] *= std::polar(1.0, sign * 1e-2);
      } else {
        const std::size_t l = off[static_cast<std::size_t>(s.uniform() * static_cast<double>(off.size()))];
        c[l] += std::polar(1e-2, 2.0 * std::numbers::pi * s.uniform());
      }
      const auto r = ur_report(c.normalized());
      rec.record(0.0, !(r.deficit > 0.0), [&] {
        return "d=" + std::to_string(d) + " d1=" + std::to_string(m.spec.d1) + " deficit=" + std::to_string(r.deficit);
      });
    }
  return rec.done();
}

// ---------------------------------------------------------------------------
// measures

inline CheckResult pure_entanglement_identity(std::size_t d_max, int samples, std::uint64_t seed, double tol) {
  detail::Recorder rec("measures.pure_entanglement_identity");
  Sampler s(seed);
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 8); ++d)
    for (int i = 0; i < samples; ++i) {
      const auto c = s.haar_vector(d);
      const double e = pure_entanglement(family_superposition(c, BasisConvention::Column));
      const double h = shannon_entropy_bits(modulus_squared(dft(c)));
      rec.record(std::abs(e - h), std::abs(e - h) > tol,
                 [&] { return "d=" + std::to_string(d) + " E=" + std::to_string(e) + " S=" + std::to_string(h); });
    }
  return rec.done();
}

inline CheckResult chain(std::size_t d_lo, std::size_t d_hi, int samples, const OptimizerConfig& cfg, std::uint64_t seed) {
  detail::Recorder rec("measures.chain");
  Sampler s(seed);
  for (std::size_t d = d_lo; d <= d_hi; ++d)
    for (int i = 0; i < samples; ++i) {
      const auto lam = s.probability_vector(d);
      const double e = epsilon_min(lam, cfg).value, ed = ed_plus(lam);
      rec.record(std::max(0.0, ed - e), ed > e + 1e-6,
                 [&] { return "d=" + std::to_string(d) + " lambda=" + detail::fmt_vec(lam.values()); });
    }
  return rec.done();
}

/// epsilon = E_D^+ at every lambda induced by a minimal-uncertainty vector.
inline CheckResult equality_certification(std::size_t d_lo, std::size_t d_hi, const OptimizerConfig& cfg) {
  detail::Recorder rec("measures.equality_certification");
  for (std::size_t d = d_lo; d <= d_hi; ++d)
    for (const auto& p : minimizer_profiles(d)) {
      const ProbVector lam(p);
      const double g = epsilon_min(lam, cfg).value - ed_plus(lam);
      rec.record(std::abs(g), std::abs(g) >= 1e-6,
                 [&] { return "d=" + std::to_string(d) + " lambda=" + detail::fmt_vec(p); });
    }
  return rec.done();
}

inline std::size_t oracle_grid(std::size_t d) {
  switch (d) {
    case 2: return 720;
    case 3: return 120;
    default: return 48;
  }
}

inline CheckResult strict_gap(const OptimizerConfig& cfg) {
  detail::Recorder rec("measures.strict_gap");
  for (const auto& p : {std::vector<double>{0.75, 0.25}, std::vector<double>{0.6, 0.3, 0.1}}) {
    const ProbVector lam(p);
    const double e = epsilon_min(lam, cfg).value, ed = ed_plus(lam);
    const double bf = epsilon_bruteforce(lam, oracle_grid(lam.dim()));
    const bool bad = !(e - ed > 1e-3) || std::abs(e - bf) >= 1e-3;
    rec.record(std::abs(e - bf), bad, [&] {
      return "lambda=" + detail::fmt_vec(p) + " eps=" + std::to_string(e) + " ed+=" + std::to_string(ed) +
             " grid=" + std::to_string(bf);
    });
  }
  return rec.done();
}

inline CheckResult oracle_agreement(std::size_t d_lo, std::size_t d_hi, int samples, const OptimizerConfig& cfg,
                                    std::uint64_t seed) {
  detail::Recorder rec("measures.oracle_agreement");
  Sampler s(seed);
  for (std::size_t d = d_lo; d <= std::min<std::size_t>(d_hi, 4); ++d)
    for (int i = 0; i < samples; ++i) {
      const auto lam = s.probability_vector(d);
      const double e = epsilon_min(lam, cfg).value;
      const double bf = epsilon_bruteforce(lam, oracle_grid(d));
      rec.record(std::abs(e - bf), std::abs(e - bf) >= 1e-3, [&] {
        return "d=" + std::to_string(d) + " lambda=" + detail::fmt_vec(lam.values()) + " eps=" + std::to_string(e) +
               " grid=" + std::to_string(bf);
      });
    }
  return rec.done();
}

inline CheckResult gap_point_sanity(std::size_t d_max, std::size_t steps, const OptimizerConfig& cfg) {
  detail::Recorder rec("measures.gap_point_sanity");
  const auto grid = linspace(0.0, 1.0, steps);
  for (std::size_t d = 2; d <= std::min<std::size_t>(d_max, 4); ++d)
    for (const auto& g : gap_sweep(d, grid, cfg)) {
      const bool bad = g.gap < -1e-6 || g.relative_gap < 0.0 || g.relative_gap > 1.0 + 1e-6;
      rec.record(std::max(0.0, -g.gap), bad, [&] {
        return "d=" + std::to_string(d) + " nu=" + std::to_string(g.nu) + " gap=" + std::to_string(g.gap) +
               " rel=" + std::to_string(g.relative_gap);
      });
    }
  return rec.done();
}

// ---------------------------------------------------------------------------

struct SuiteConfig {
  std::size_t d_max = 6;
  int samples = 20;
  std::uint64_t seed = 7;
  double tol = kAssertTol;
  OptimizerConfig optimizer{};
};

/// Every invariant at the configured sizes, in a fixed order.
inline std::vector<CheckResult> run_all(const SuiteConfig& c) {
  const std::size_t dm = std::max<std::size_t>(c.d_max, 2);
  std::vector<std::size_t> rev_dims;
  for (std::size_t d = 2; d <= dm; ++d) rev_dims.push_back(d);

  std::vector<CheckResult> out;
  out.push_back(ptrace_of_kron(std::min<std::size_t>(dm, 4), std::max(1, c.samples / 10), c.seed, c.tol));
  out.push_back(density_spectra(dm, c.samples, c.seed + 1, c.tol));
  out.push_back(ptranspose_hermitian_trace(dm, c.samples, c.seed + 2, c.tol));
  out.push_back(group_commutes(dm, c.samples, c.seed + 3, c.tol));
  out.push_back(twirl_contract(dm, c.samples, c.seed + 4, c.tol));
  out.push_back(twirl_positivity(dm, c.samples, c.seed + 5, c.tol));
  out.push_back(npt_off_uniform(dm));
  out.push_back(eb_isometry_support(dm, c.samples, c.seed + 6, c.tol));
  out.push_back(eb_equivalence(dm, c.tol));
  out.push_back(eb_choi_ppt(dm, c.tol));
  out.push_back(reversible_split(rev_dims, c.tol));
  out.push_back(entropic_ur(2, std::max<std::size_t>(dm, 2), c.samples * 10, c.seed + 7, c.tol));
  out.push_back(support_ur(2, std::max<std::size_t>(dm, 2), c.samples * 10, c.seed + 8));
  out.push_back(minimizer_soundness(dm, c.tol));
  out.push_back(perturbation_rigidity(dm, c.seed + 9));
  out.push_back(pure_entanglement_identity(dm, c.samples, c.seed + 10, c.tol));
  out.push_back(chain(2, std::min<std::size_t>(dm, 5), c.samples, c.optimizer, c.seed + 11));
  out.push_back(equality_certification(2, dm, c.optimizer));
  out.push_back(strict_gap(c.optimizer));
  out.push_back(oracle_agreement(2, std::min<std::size_t>(dm, 4), std::max(1, c.samples / 4), c.optimizer, c.seed + 12));
  out.push_back(gap_point_sanity(dm, 21, c.optimizer));
  return out;
}

}  // namespace irrev::checks
