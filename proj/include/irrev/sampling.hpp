// sampling.hpp
// Seeded random instances: Haar unit vectors, flat-Dirichlet probability
// vectors, Ginibre density operators.

#pragma once

#include "irrev/qcore.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace irrev {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double normal() {
    // Box-Muller on our own uniforms keeps streams identical across libstdc++/libc++.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  cplx complex_normal() { return {normal(), normal()}; }

  CVector haar_vector(std::size_t d) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal();
    return CVector(v / v.norm());
  }

  CVector haar_vector(BipartiteDims dims) { return CVector(haar_vector(dims.total()).data(), dims); }

  ProbVector probability_vector(std::size_t d) {
    std::vector<double> p(d);
    double s = 0.0;
    for (auto& x : p) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      x = -std::log(u);
      s += x;
    }
    for (auto& x : p) x /= s;
    return ProbVector(std::move(p));
  }

  CMatrix density_operator(BipartiteDims dims) {
    const auto n = static_cast<Eigen::Index>(dims.total());
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = complex_normal();
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return CMatrix(rho, dims);
  }

  CMatrix complex_matrix(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd g(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) g(i, j) = complex_normal();
    return CMatrix(g);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace irrev
