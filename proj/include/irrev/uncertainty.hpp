// uncertainty.hpp
// Discrete Fourier transform, support and entropic uncertainty functionals,
// and the picket-fence vectors that saturate them.

#pragma once

#include "irrev/qcore.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace irrev {

/// chat_k = d^{-1/2} sum_l eta^{kl} c_l.
inline CVector dft(const CVector& c) {
  const std::size_t d = c.dim();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k) {
    cplx acc{};
    for (std::size_t l = 0; l < d; ++l) acc += root_of_unity(d, static_cast<long long>(k * l)) * c[l];
    out(static_cast<Eigen::Index>(k)) = s * acc;
  }
  return CVector(std::move(out));
}

inline std::vector<double> modulus_squared(const CVector& c) {
  std::vector<double> p(c.dim());
  for (std::size_t i = 0; i < c.dim(); ++i) p[i] = std::norm(c[i]);
  return p;
}

inline std::size_t support_size(const CVector& c, double tol) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < c.dim(); ++i)
    if (std::abs(c[i]) > tol) ++n;
  return n;
}

struct URReport {
  std::size_t support_c = 0;
  std::size_t support_chat = 0;
  double entropy_c = 0.0;
  double entropy_chat = 0.0;
  double sum = 0.0;
  double deficit = 0.0;  // sum - log2 d

  bool support_ur_holds(std::size_t d) const { return support_c * support_chat >= d; }
  bool entropic_ur_holds(double tol = kAssertTol) const { return deficit >= -tol; }
};

inline URReport ur_report(const CVector& c, double support_tol = kAssertTol) {
  if (c.dim() == 0) throw DimensionError("ur_report: empty vector");
  if (!c.is_normalized(kAssertTol)) throw ValidationError("ur_report: vector is not normalized");
  const auto chat = dft(c);
  URReport r;
  r.support_c = support_size(c, support_tol);
  r.support_chat = support_size(chat, support_tol);
  r.entropy_c = shannon_entropy_bits(modulus_squared(c));
  r.entropy_chat = shannon_entropy_bits(modulus_squared(chat));
  r.sum = r.entropy_c + r.entropy_chat;
  r.deficit = r.sum - std::log2(static_cast<double>(c.dim()));
  return r;
}

// ---------------------------------------------------------------------------
// Minimal-uncertainty vectors c_l = alpha eta^{beta l} delta_{0,(l+gamma) mod d1}

struct MinimizerSpec {
  std::size_t d1 = 1;
  std::size_t d2 = 1;
  std::size_t beta = 0;   // mod d2
  std::size_t gamma = 0;  // mod d1

  bool operator==(const MinimizerSpec&) const = default;
};

inline std::vector<std::size_t> divisors(std::size_t d) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= d; ++k)
    if (d % k == 0) out.push_back(k);
  return out;
}

inline CVector minimizer_vector(const MinimizerSpec& s) {
  const std::size_t d = s.d1 * s.d2;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
  const double alpha = 1.0 / std::sqrt(static_cast<double>(s.d2));
  for (std::size_t l = 0; l < d; ++l)
    if ((l + s.gamma) % s.d1 == 0)
      v(static_cast<Eigen::Index>(l)) = alpha * root_of_unity(d, static_cast<long long>(s.beta * l));
  return CVector(std::move(v));
}

namespace detail {

// (modulus profile rounded to 1e-10, phase differences on the support
// rounded to 1e-8); equal keys mean equal vectors up to a global phase.
using PhaseKey = std::tuple<std::vector<long long>, std::vector<long long>>;

inline PhaseKey phase_key(const CVector& c) {
  std::vector<long long> mod, ph;
  std::optional<double> ref;
  for (std::size_t l = 0; l < c.dim(); ++l) {
    const double m = std::abs(c[l]);
    mod.push_back(std::llround(m * 1e10));
    if (m <= kAssertTol) continue;
    const double a = std::arg(c[l]);
    if (!ref) {
      ref = a;
      continue;
    }
    double diff = std::fmod(a - *ref, 2.0 * std::numbers::pi);
    if (diff < 0) diff += 2.0 * std::numbers::pi;
    long long q = std::llround(diff * 1e8);
    if (q == std::llround(2.0 * std::numbers::pi * 1e8)) q = 0;
    ph.push_back(q);
  }
  return {std::move(mod), std::move(ph)};
}

}  // namespace detail

struct Minimizer {
  MinimizerSpec spec;
  CVector c;
};

/// All picket-fence vectors for d, ordered by (d1, gamma, beta), with
/// duplicates up to global phase removed.
inline std::vector<Minimizer> enumerate_minimizers(std::size_t d) {
  if (d == 0) throw ValidationError("enumerate_minimizers: d must be positive");
  std::vector<Minimizer> out;
  std::set<detail::PhaseKey> seen;
  for (std::size_t d1 : divisors(d)) {
    const std::size_t d2 = d / d1;
    for (std::size_t gamma = 0; gamma < d1; ++gamma)
      for (std::size_t beta = 0; beta < d2; ++beta) {
        MinimizerSpec s{d1, d2, beta, gamma};
        auto c = minimizer_vector(s);
        if (seen.insert(detail::phase_key(c)).second) out.push_back({s, std::move(c)});
      }
  }
  return out;
}

/// Distinct lambda = |c|^2 profiles among the enumerated minimizers.
inline std::vector<std::vector<double>> minimizer_profiles(std::size_t d) {
  std::map<std::vector<long long>, std::vector<double>> uniq;
  for (const auto& m : enumerate_minimizers(d)) {
    auto p = modulus_squared(m.c);
    std::vector<long long> key;
    for (double x : p) key.push_back(std::llround(x * 1e10));
    uniq.emplace(std::move(key), std::move(p));
  }
  std::vector<std::vector<double>> out;
  for (auto& [k, v] : uniq) out.push_back(std::move(v));
  return out;
}

struct MinimizerMatch {
  bool is_minimizer = false;
  double deficit = 0.0;
  std::optional<MinimizerSpec> spec;
};

/// Deficit test plus recovery of (d1, beta, gamma) from the support pattern
/// and the phase step between neighbouring support points.
inline MinimizerMatch is_minimizer(const CVector& c, double tol = kAssertTol) {
  MinimizerMatch m;
  const auto rep = ur_report(c);
  m.deficit = rep.deficit;
  m.is_minimizer = rep.deficit < tol;
  if (!m.is_minimizer) return m;

  const std::size_t d = c.dim();
  std::vector<std::size_t> supp;
  const double amp_floor = 0.5 / std::sqrt(static_cast<double>(d));
  for (std::size_t l = 0; l < d; ++l)
    if (std::abs(c[l]) > amp_floor) supp.push_back(l);
  if (supp.empty() || d % supp.size() != 0) return m;

  MinimizerSpec s;
  s.d2 = supp.size();
  s.d1 = d / s.d2;
  s.gamma = (s.d1 - supp.front() % s.d1) % s.d1;
  if (s.d2 > 1) {
    // c_{l + d1} / c_l = eta^{beta d1} = exp(2 pi i beta / d2)
    const cplx ratio = c[supp[1]] / c[supp[0]];
    double turns = std::arg(ratio) / (2.0 * std::numbers::pi);
    if (turns < 0) turns += 1.0;
    s.beta = static_cast<std::size_t>(std::llround(turns * static_cast<double>(s.d2))) % s.d2;
  }
  // Confirm up to global phase.
  const auto ref = minimizer_vector(s);
  const cplx overlap = ref.data().dot(c.data());
  if (std::abs(std::abs(overlap) - 1.0) < 1e-6) m.spec = s;
  return m;
}

}  // namespace irrev
