// qcore.hpp
// Dense complex linear algebra for small bipartite systems: Kronecker
// products, partial traces and transposes, Hermitian spectra, entropies.
//
// Bipartite index convention: |j> (x) |k> occupies slot j * d_B + k.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irrev {

using cplx = std::complex<double>;

/// Shape or split mismatch between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input violates a documented precondition (Hermiticity, normalization, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kAssertTol = 1e-9;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenDustTol = 1e-10;

enum class Subsystem { A, B };

struct BipartiteDims {
  std::size_t a = 1;
  std::size_t b = 1;
  std::size_t total() const { return a * b; }
  bool operator==(const BipartiteDims&) const = default;
};

/// Complex column vector with an optional bipartite split.
class CVector {
 public:
  CVector() = default;
  explicit CVector(Eigen::VectorXcd v, std::optional<BipartiteDims> split = std::nullopt)
      : v_(std::move(v)), split_(split) {
    if (split_ && split_->total() != static_cast<std::size_t>(v_.size()))
      throw DimensionError("CVector: split does not match length");
  }

  std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }
  const Eigen::VectorXcd& data() const { return v_; }
  Eigen::VectorXcd& data() { return v_; }
  const std::optional<BipartiteDims>& split() const { return split_; }

  cplx operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
  cplx& operator[](std::size_t i) { return v_(static_cast<Eigen::Index>(i)); }

  double norm() const { return v_.norm(); }
  bool is_normalized(double tol = kNormTol) const { return std::abs(v_.norm() - 1.0) <= tol; }

  CVector normalized() const { return CVector(v_ / v_.norm(), split_); }

 private:
  Eigen::VectorXcd v_;
  std::optional<BipartiteDims> split_;
};

/// Square complex matrix with an optional bipartite split (d_A, d_B).
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(Eigen::MatrixXcd m, std::optional<BipartiteDims> split = std::nullopt)
      : m_(std::move(m)), split_(split) {
    if (m_.rows() != m_.cols()) throw DimensionError("CMatrix: matrix must be square");
    if (split_ && split_->total() != static_cast<std::size_t>(m_.rows()))
      throw DimensionError("CMatrix: split does not match size");
  }

  static CMatrix zero(std::size_t n, std::optional<BipartiteDims> split = std::nullopt) {
    auto k = static_cast<Eigen::Index>(n);
    return CMatrix(Eigen::MatrixXcd::Zero(k, k), split);
  }
  static CMatrix identity(std::size_t n, std::optional<BipartiteDims> split = std::nullopt) {
    auto k = static_cast<Eigen::Index>(n);
    return CMatrix(Eigen::MatrixXcd::Identity(k, k), split);
  }
  static CMatrix diagonal(std::span<const double> d) {
    auto m = zero(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  /// |v><v|, inheriting v's split.
  static CMatrix projector(const CVector& v) {
    return CMatrix(v.data() * v.data().adjoint(), v.split());
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXcd& data() const { return m_; }
  Eigen::MatrixXcd& data() { return m_; }
  const std::optional<BipartiteDims>& split() const { return split_; }

  CMatrix with_split(BipartiteDims s) const { return CMatrix(m_, s); }

  cplx operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  cplx& operator()(std::size_t i, std::size_t j) {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  cplx trace() const { return m_.trace(); }
  CMatrix adjoint() const { return CMatrix(m_.adjoint(), split_); }

  double hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  bool is_hermitian(double tol = kHermitianTol) const { return dim() == 0 || hermiticity_error() < tol; }

 private:
  Eigen::MatrixXcd m_;
  std::optional<BipartiteDims> split_;
};

inline CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionError("operator+: shape mismatch");
  return CMatrix(x.data() + y.data(), x.split());
}
inline CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionError("operator-: shape mismatch");
  return CMatrix(x.data() - y.data(), x.split());
}
inline CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionError("operator*: shape mismatch");
  return CMatrix(x.data() * y.data(), x.split());
}
inline CMatrix operator*(cplx s, const CMatrix& x) { return CMatrix(s * x.data(), x.split()); }
inline CMatrix operator*(double s, const CMatrix& x) { return CMatrix(s * x.data(), x.split()); }

/// Largest entrywise modulus of x - y.
inline double max_abs_diff(const CMatrix& x, const CMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionError("max_abs_diff: shape mismatch");
  if (x.dim() == 0) return 0.0;
  return (x.data() - y.data()).cwiseAbs().maxCoeff();
}

/// Computational basis ket |i> in dimension n.
inline CVector basis_ket(std::size_t i, std::size_t n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return CVector(std::move(v));
}

/// |j> (x) |k> as a bipartite ket.
inline CVector product_ket(std::size_t j, std::size_t k, BipartiteDims dims) {
  auto v = basis_ket(j * dims.b + k, dims.total());
  return CVector(v.data(), dims);
}

inline CVector kron(const CVector& x, const CVector& y) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(x.dim() * y.dim()));
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < y.dim(); ++j)
      out(static_cast<Eigen::Index>(i * y.dim() + j)) = x[i] * y[j];
  return CVector(std::move(out), BipartiteDims{x.dim(), y.dim()});
}

/// Kronecker product; the result carries split (rows(A), rows(B)).
inline CMatrix kron(const CMatrix& x, const CMatrix& y) {
  const std::size_t n = x.dim(), m = y.dim();
  auto out = CMatrix::zero(n * m, BipartiteDims{n, m});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx xij = x(i, j);
      if (xij == cplx{}) continue;
      out.data().block(static_cast<Eigen::Index>(i * m), static_cast<Eigen::Index>(j * m),
                       static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = xij * y.data();
    }
  return out;
}

namespace detail {
inline BipartiteDims require_split(const CMatrix& rho, const char* what) {
  if (!rho.split()) throw DimensionError(std::string(what) + ": operator has no bipartite split");
  return *rho.split();
}
}  // namespace detail

/// Reduced operator on `keep`, tracing out the other factor.
inline CMatrix partial_trace(const CMatrix& rho, Subsystem keep) {
  const auto [da, db] = detail::require_split(rho, "partial_trace");
  if (keep == Subsystem::A) {
    auto out = CMatrix::zero(da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t ip = 0; ip < da; ++ip) {
        cplx s{};
        for (std::size_t k = 0; k < db; ++k) s += rho(i * db + k, ip * db + k);
        out(i, ip) = s;
      }
    return out;
  }
  auto out = CMatrix::zero(db);
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t kp = 0; kp < db; ++kp) {
      cplx s{};
      for (std::size_t i = 0; i < da; ++i) s += rho(i * db + k, i * db + kp);
      out(k, kp) = s;
    }
  return out;
}

/// Transpose of the `side` tensor factor.
inline CMatrix partial_transpose(const CMatrix& rho, Subsystem side) {
  const auto dims = detail::require_split(rho, "partial_transpose");
  const auto [da, db] = dims;
  auto out = CMatrix::zero(rho.dim(), dims);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < db; ++k)
      for (std::size_t ip = 0; ip < da; ++ip)
        for (std::size_t kp = 0; kp < db; ++kp) {
          const std::size_t row = i * db + k, col = ip * db + kp;
          out(row, col) = side == Subsystem::B ? rho(i * db + kp, ip * db + k)
                                               : rho(ip * db + k, i * db + kp);
        }
  return out;
}

/// Ascending real spectrum of a Hermitian matrix.
inline std::vector<double> herm_eigvals(const CMatrix& h) {
  if (!h.is_hermitian())
    throw ValidationError("herm_eigvals: matrix is not Hermitian (error " +
                          std::to_string(h.hermiticity_error()) + ")");
  if (h.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.data(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

inline double min_eigval(const CMatrix& h) { return herm_eigvals(h).front(); }

/// (1/2) sum |eig(rho - sigma)|.
inline double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance: shape mismatch");
  if (!rho.is_hermitian() || !sigma.is_hermitian())
    throw ValidationError("trace_distance: operands must be Hermitian");
  double s = 0.0;
  for (double e : herm_eigvals(CMatrix(rho.data() - sigma.data()))) s += std::abs(e);
  return 0.5 * s;
}

/// Shannon entropy in bits, 0 log 0 = 0. Negative dust is clipped to 0.
inline double shannon_entropy_bits(std::span<const double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log2(x);
  return s;
}

/// von Neumann entropy in bits; eigenvalues below zero are clipped.
inline double von_neumann_entropy_bits(const CMatrix& rho) {
  auto ev = herm_eigvals(rho);
  if (!ev.empty() && ev.front() < -kEigenDustTol)
    throw ValidationError("von_neumann_entropy_bits: operator is not positive semidefinite");
  return shannon_entropy_bits(ev);
}

/// Validated probability vector: entries >= 0, sum 1 within 1e-9.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(std::vector<double> p, double tol = kAssertTol) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("ProbVector: empty");
    double sum = 0.0;
    for (double x : p_) {
      if (!std::isfinite(x) || x < 0.0) throw ValidationError("ProbVector: negative or non-finite entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError("ProbVector: entries sum to " + std::to_string(sum) + ", not 1");
  }

  static ProbVector uniform(std::size_t d) { return ProbVector(std::vector<double>(d, 1.0 / static_cast<double>(d))); }
  static ProbVector point_mass(std::size_t d, std::size_t at = 0) {
    std::vector<double> p(d, 0.0);
    p.at(at) = 1.0;
    return ProbVector(std::move(p));
  }

  std::size_t dim() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const { return p_; }
  const std::vector<double>& vec() const { return p_; }

  std::size_t support_size(double tol = 0.0) const {
    return static_cast<std::size_t>(std::count_if(p_.begin(), p_.end(), [tol](double x) { return x > tol; }));
  }
  double entropy_bits() const { return shannon_entropy_bits(p_); }

 private:
  std::vector<double> p_;
};

/// eta^m with eta = exp(2 pi i / d); exponent reduced mod d first.
inline cplx root_of_unity(std::size_t d, long long m) {
  const auto dd = static_cast<long long>(d);
  long long r = m % dd;
  if (r < 0) r += dd;
  if (r == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d));
}

}  // namespace irrev
