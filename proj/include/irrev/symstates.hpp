// symstates.hpp
// Weyl unitaries, the maximally entangled basis Psi_kl, the Bell-diagonal
// family rho_lambda, the twirls onto Bell-diagonal and isotropic states,
// the measure-and-prepare map associated with the isometry |l> -> Psi_l,
// tagged (quasi-pure) mixtures and the tensor split of reversible states.

#pragma once

#include "irrev/qcore.hpp"

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace irrev {

/// (k, l) label of U_kl in dimension d, both reduced mod d.
struct WeylIndex {
  long long k = 0;
  long long l = 0;
  std::size_t d = 1;

  WeylIndex() = default;
  WeylIndex(long long k_, long long l_, std::size_t d_) : d(d_) {
    if (d_ == 0) throw ValidationError("WeylIndex: dimension must be positive");
    const auto dd = static_cast<long long>(d_);
    k = ((k_ % dd) + dd) % dd;
    l = ((l_ % dd) + dd) % dd;
  }
};

/// Which one-parameter slice of the Bell basis indexes rho_lambda.
/// Column: Psi_l = Psi_{0l}.  Row: Psi_l = Psi_{l0}.
enum class BasisConvention { Column, Row };

inline WeylIndex family_index(std::size_t l, std::size_t d, BasisConvention conv) {
  const auto ll = static_cast<long long>(l);
  return conv == BasisConvention::Column ? WeylIndex(0, ll, d) : WeylIndex(ll, 0, d);
}

/// U_kl = sum_r eta^{rl} |k + r><r|.
inline CMatrix weyl_unitary(const WeylIndex& idx) {
  auto u = CMatrix::zero(idx.d);
  for (std::size_t r = 0; r < idx.d; ++r)
    u((static_cast<std::size_t>(idx.k) + r) % idx.d, r) = root_of_unity(idx.d, static_cast<long long>(r) * idx.l);
  return u;
}

/// Psi_kl = d^{-1/2} sum_j |j> (x) U_kl |j>.
inline CVector bell_state(const WeylIndex& idx) {
  const std::size_t d = idx.d;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t b = (static_cast<std::size_t>(idx.k) + j) % d;
    v(static_cast<Eigen::Index>(j * d + b)) = s * root_of_unity(d, static_cast<long long>(j) * idx.l);
  }
  return CVector(std::move(v), BipartiteDims{d, d});
}

inline CVector family_state(std::size_t l, std::size_t d, BasisConvention conv) {
  return bell_state(family_index(l, d, conv));
}

/// sum_l lambda_l |Psi_l><Psi_l|.
inline CMatrix rho_lambda(const ProbVector& lambda, BasisConvention conv) {
  const std::size_t d = lambda.dim();
  auto rho = CMatrix::zero(d * d, BipartiteDims{d, d});
  for (std::size_t l = 0; l < d; ++l) {
    if (lambda[l] == 0.0) continue;
    const auto psi = family_state(l, d, conv);
    rho.data() += lambda[l] * (psi.data() * psi.data().adjoint());
  }
  return rho;
}

/// d x d table of <Psi_kl|rho|Psi_kl>, row k, column l.
inline std::vector<std::vector<double>> bell_diagonal(const CMatrix& rho) {
  const auto dims = detail::require_split(rho, "bell_diagonal");
  if (dims.a != dims.b) throw DimensionError("bell_diagonal: need a d x d split");
  const std::size_t d = dims.a;
  std::vector<std::vector<double>> out(d, std::vector<double>(d));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      const auto psi = bell_state(WeylIndex(static_cast<long long>(k), static_cast<long long>(l), d));
      out[k][l] = (psi.data().adjoint() * rho.data() * psi.data())(0, 0).real();
    }
  return out;
}

namespace detail {

// g = U_{a,b} (x) U_{a,-b} acts as g|i,j> = phase * |i+a, j+a>.
struct Monomial {
  std::vector<std::size_t> target;
  std::vector<cplx> phase;
};

inline Monomial group_element(std::size_t a, std::size_t b, std::size_t d) {
  Monomial g;
  g.target.resize(d * d);
  g.phase.resize(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t x = i * d + j;
      g.target[x] = ((i + a) % d) * d + (j + a) % d;
      g.phase[x] = root_of_unity(d, static_cast<long long>(b) * (static_cast<long long>(i) - static_cast<long long>(j)));
    }
  return g;
}

inline std::size_t require_square_split(const CMatrix& rho, const char* what) {
  const auto dims = require_split(rho, what);
  if (dims.a != dims.b) throw DimensionError(std::string(what) + ": need a d x d split");
  return dims.a;
}

}  // namespace detail

/// The group element U_{a,b} (x) U_{a,-b} as a dense matrix.
inline CMatrix symmetry_element(std::size_t a, std::size_t b, std::size_t d) {
  const auto ia = static_cast<long long>(a), ib = static_cast<long long>(b);
  return kron(weyl_unitary(WeylIndex(ia, ib, d)), weyl_unitary(WeylIndex(ia, -ib, d)));
}

/// d^{-2} sum_{g in G} g^* rho g over G = {U_{k,l} (x) U_{k,-l}}. Exact sum.
/// Every Bell-diagonal state is fixed, so the result does not depend on
/// which slice of the Bell basis labels rho_lambda.
inline CMatrix twirl_G(const CMatrix& rho) {
  const std::size_t d = detail::require_square_split(rho, "twirl_G");
  const std::size_t n = d * d;
  auto out = CMatrix::zero(n, BipartiteDims{d, d});
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const auto g = detail::group_element(a, b, d);
      for (std::size_t x = 0; x < n; ++x) {
        const cplx px = std::conj(g.phase[x]);
        for (std::size_t y = 0; y < n; ++y) out(x, y) += px * g.phase[y] * rho(g.target[x], g.target[y]);
      }
    }
  out.data() /= static_cast<double>(n);
  return out;
}

/// f |Psi_0><Psi_0| + (1 - f)/(d^2 - 1) (1 - |Psi_0><Psi_0|).
inline CMatrix isotropic_state(double f, std::size_t d) {
  if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("isotropic_state: fidelity outside [0, 1]");
  if (d < 2) throw ValidationError("isotropic_state: need d >= 2");
  const std::size_t n = d * d;
  const auto p0 = CMatrix::projector(bell_state(WeylIndex(0, 0, d)));
  const double w = (1.0 - f) / static_cast<double>(n - 1);
  auto out = CMatrix::identity(n, BipartiteDims{d, d});
  out.data() = f * p0.data() + w * (out.data() - p0.data());
  return out;
}

/// Projection onto span{|Psi_0><Psi_0|, 1}, the U (x) conj(U) twirl.
inline CMatrix twirl_isotropic(const CMatrix& rho) {
  const std::size_t d = detail::require_square_split(rho, "twirl_isotropic");
  if (d < 2) throw DimensionError("twirl_isotropic: need d >= 2");
  const auto psi0 = bell_state(WeylIndex(0, 0, d));
  const double f = (psi0.data().adjoint() * rho.data() * psi0.data())(0, 0).real();
  const double t = rho.trace().real();
  const std::size_t n = d * d;
  const auto p0 = CMatrix::projector(psi0);
  auto out = CMatrix::identity(n, BipartiteDims{d, d});
  out.data() = f * p0.data() + (t - f) / static_cast<double>(n - 1) * (out.data() - p0.data());
  return out;
}

/// Measure-and-prepare channel M(X) = sum_j sigma_j tr(F_j X) together with
/// the isometry V: |l> -> Psi_{0l} whose complementary trace it reproduces.
struct EBMap {
  std::size_t d = 0;
  std::vector<CMatrix> povm;      // F_j = |phi_j><phi_j|
  std::vector<CMatrix> prepared;  // sigma_j = |j><j|
  Eigen::MatrixXcd isometry;      // d^2 x d
};

/// phi_l = d^{-1/2} sum_j eta^{-lj} |j>.
inline CVector fourier_ket(std::size_t l, std::size_t d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j)
    v(static_cast<Eigen::Index>(j)) = s * root_of_unity(d, -static_cast<long long>(l * j));
  return CVector(std::move(v));
}

inline EBMap eb_map(std::size_t d) {
  if (d == 0) throw ValidationError("eb_map: dimension must be positive");
  EBMap m;
  m.d = d;
  m.isometry = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d));
  for (std::size_t l = 0; l < d; ++l) {
    m.povm.push_back(CMatrix::projector(fourier_ket(l, d)));
    m.prepared.push_back(CMatrix::projector(basis_ket(l, d)));
    m.isometry.col(static_cast<Eigen::Index>(l)) = family_state(l, d, BasisConvention::Column).data();
  }
  return m;
}

inline CMatrix eb_apply(const EBMap& m, const CMatrix& x) {
  if (x.dim() != m.d) throw DimensionError("eb_apply: input must be d x d");
  auto out = CMatrix::zero(m.d);
  for (std::size_t j = 0; j < m.d; ++j)
    out.data() += (m.povm[j].data() * x.data()).trace() * m.prepared[j].data();
  return out;
}

/// tr_B(V X V^*), the same channel written through the isometry.
inline CMatrix eb_apply_via_isometry(const EBMap& m, const CMatrix& x) {
  if (x.dim() != m.d) throw DimensionError("eb_apply_via_isometry: input must be d x d");
  CMatrix lifted(m.isometry * x.data() * m.isometry.adjoint(), BipartiteDims{m.d, m.d});
  return partial_trace(lifted, Subsystem::A);
}

/// Choi operator sum_{ij} |i><j| (x) M(|i><j|).
inline CMatrix eb_choi(const EBMap& m) {
  auto choi = CMatrix::zero(m.d * m.d, BipartiteDims{m.d, m.d});
  for (std::size_t i = 0; i < m.d; ++i)
    for (std::size_t j = 0; j < m.d; ++j) {
      auto unit = CMatrix::zero(m.d);
      unit(i, j) = 1.0;
      choi.data() += kron(unit, eb_apply(m, unit)).data();
    }
  return choi;
}

// ---------------------------------------------------------------------------
// Quasi-pure (tagged) mixtures

struct TaggedBranch {
  double p = 0.0;
  CVector phi;  // bipartite, normalized
  std::size_t tag = 0;
};

struct TaggedEnsemble {
  std::vector<TaggedBranch> branches;
  std::size_t tag_dim = 0;
};

enum class TagSide { A, B, Both };

struct TaggedState {
  CMatrix tau;
  /// sum_t p_t E(Phi_t): both preparation cost and distillable entanglement.
  double quasi_pure_bits = 0.0;
};

/// Entanglement entropy of a normalized bipartite pure state, in bits.
inline double entanglement_entropy_bits(const CVector& phi) {
  if (!phi.split()) throw DimensionError("entanglement_entropy_bits: ket has no bipartite split");
  const auto [da, db] = *phi.split();
  // Reshape to a d_A x d_B coefficient matrix; rho_A = M M^*.
  Eigen::MatrixXcd coeff(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < db; ++k)
      coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = phi[i * db + k];
  return von_neumann_entropy_bits(CMatrix(coeff * coeff.adjoint()));
}

/// tau = sum_t p_t |Phi_t><Phi_t| (x) |t><t|, tag appended on `side`
/// (as |t>|t> when both parties hold a copy).
inline TaggedState tagged_state(const TaggedEnsemble& e, TagSide side) {
  if (e.branches.empty()) throw ValidationError("tagged_state: empty ensemble");
  if (e.tag_dim == 0) throw ValidationError("tagged_state: tag dimension must be positive");
  const auto dims = e.branches.front().phi.split();
  if (!dims) throw DimensionError("tagged_state: branch has no bipartite split");

  std::set<std::size_t> seen;
  double total = 0.0;
  for (const auto& br : e.branches) {
    if (br.tag >= e.tag_dim || !seen.insert(br.tag).second)
      throw ValidationError("tagged_state: tags must be distinct basis labels (orthogonal tags)");
    if (br.phi.split() != dims) throw DimensionError("tagged_state: branches disagree on dimensions");
    if (!br.phi.is_normalized(kAssertTol)) throw ValidationError("tagged_state: branch state not normalized");
    if (br.p < 0.0) throw ValidationError("tagged_state: negative weight");
    total += br.p;
  }
  if (std::abs(total - 1.0) > kAssertTol) throw ValidationError("tagged_state: weights do not sum to 1");

  const std::size_t da = dims->a, db = dims->b, T = e.tag_dim;
  const BipartiteDims out_dims{side == TagSide::B ? da : da * T, side == TagSide::A ? db : db * T};
  auto slot = [&](std::size_t a, std::size_t b, std::size_t t) {
    const std::size_t ao = side == TagSide::B ? a : a * T + t;
    const std::size_t bo = side == TagSide::A ? b : b * T + t;
    return ao * out_dims.b + bo;
  };

  TaggedState out;
  out.tau = CMatrix::zero(out_dims.total(), out_dims);
  for (const auto& br : e.branches) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(out_dims.total()));
    for (std::size_t a = 0; a < da; ++a)
      for (std::size_t b = 0; b < db; ++b) v(static_cast<Eigen::Index>(slot(a, b, br.tag))) = br.phi[a * db + b];
    out.tau.data() += br.p * (v * v.adjoint());
    out.quasi_pure_bits += br.p * entanglement_entropy_bits(br.phi);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reversible members of the family as (pure) (x) (separable)

/// How a local index j in C^d is written as (j1, j2) in C^{d1} (x) C^{d2}.
enum class IndexSplit {
  ModFirst,  // j -> (j mod d1, j div d1)
  DivFirst,  // j -> (j div d2, j mod d2)
};

struct ReversibleDecomposition {
  std::size_t d = 0, d1 = 0, d2 = 0;
  long long gamma = 0, beta = 0;
  ProbVector lambda;
  CMatrix lhs;  // rho_lambda, Row convention, split (d, d)
  CMatrix rhs;  // |Psi_00^(d1)><..| (x) uniform Psi_k0^(d2) mixture on A1 B1 A2 B2
  IndexSplit split = IndexSplit::ModFirst;
  /// Local relabelings: A-index -> (a1, a2) and B-index -> (b1, b2).
  std::vector<std::pair<std::size_t, std::size_t>> a_map, b_map;
  /// lhs slot x corresponds to rhs slot permutation[x].
  std::vector<std::size_t> permutation;
  double trace_distance = 0.0;

  CMatrix permuted_rhs() const {
    auto out = CMatrix::zero(d * d, BipartiteDims{d, d});
    for (std::size_t x = 0; x < d * d; ++x)
      for (std::size_t y = 0; y < d * d; ++y) out(x, y) = rhs(permutation[x], permutation[y]);
    return out;
  }
};

namespace detail {
inline std::pair<std::size_t, std::size_t> split_index(std::size_t j, std::size_t d1, std::size_t d2, IndexSplit s) {
  return s == IndexSplit::ModFirst ? std::pair{j % d1, j / d1} : std::pair{j / d2, j % d2};
}
}  // namespace detail

/// Writes rho_lambda with lambda_l = (1/d2) delta_{0,(l + gamma) mod d1}
/// (Row convention) as a tensor product across the A1B1 | A2B2 cut.
/// gamma enters as a cyclic relabeling of B; beta only rephases the
/// underlying amplitude vector and leaves lambda unchanged.
inline ReversibleDecomposition reversible_decomposition(std::size_t d, std::size_t d1, long long gamma, long long beta,
                                                        double tol = kAssertTol) {
  if (d == 0 || d1 == 0 || d % d1 != 0) throw ValidationError("reversible_decomposition: d1 must divide d");
  ReversibleDecomposition r;
  r.d = d;
  r.d1 = d1;
  r.d2 = d / d1;
  const auto sd1 = static_cast<long long>(d1), sd2 = static_cast<long long>(r.d2);
  r.gamma = ((gamma % sd1) + sd1) % sd1;
  r.beta = ((beta % sd2) + sd2) % sd2;

  std::vector<double> lam(d, 0.0);
  for (std::size_t l = 0; l < d; ++l)
    if ((l + static_cast<std::size_t>(r.gamma)) % d1 == 0) lam[l] = 1.0 / static_cast<double>(r.d2);
  r.lambda = ProbVector(std::move(lam));
  r.lhs = rho_lambda(r.lambda, BasisConvention::Row);

  const auto pure = CMatrix::projector(bell_state(WeylIndex(0, 0, d1)));
  auto mixed = CMatrix::zero(r.d2 * r.d2);
  for (std::size_t k = 0; k < r.d2; ++k)
    mixed.data() += CMatrix::projector(bell_state(WeylIndex(static_cast<long long>(k), 0, r.d2))).data() /
                    static_cast<double>(r.d2);
  r.rhs = kron(pure, mixed);

  const auto try_split = [&](IndexSplit s) {
    r.split = s;
    r.a_map.assign(d, {});
    r.b_map.assign(d, {});
    for (std::size_t j = 0; j < d; ++j) {
      r.a_map[j] = detail::split_index(j, d1, r.d2, s);
      r.b_map[j] = detail::split_index((j + static_cast<std::size_t>(r.gamma)) % d, d1, r.d2, s);
    }
    r.permutation.assign(d * d, 0);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const auto [a1, a2] = r.a_map[a];
        const auto [b1, b2] = r.b_map[b];
        r.permutation[a * d + b] = (a1 * d1 + b1) * (r.d2 * r.d2) + a2 * r.d2 + b2;
      }
    r.trace_distance = irrev::trace_distance(r.lhs, r.permuted_rhs());
    return r.trace_distance < tol;
  };
  if (!try_split(IndexSplit::ModFirst)) try_split(IndexSplit::DivFirst);
  return r;
}

}  // namespace irrev
