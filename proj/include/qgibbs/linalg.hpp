#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace qgibbs {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;

/// Amplitudes over the walk registers plus any probe qubits. Qubit q is bit q
/// of the basis index.
using Statevector = ComplexVector;
using StateIndex = std::uint64_t;

using Rng = std::mt19937_64;

// Tolerance ladder.
inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kEigenTol = 1e-9;

constexpr bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr int log2_exact(std::uint64_t v) {
  int bits = 0;
  while (v > 1) {
    v >>= 1;
    ++bits;
  }
  return bits;
}

/// Uniform draw in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Inverse-CDF draw from a discrete distribution.
template <typename Derived>
Eigen::Index sample_index(const Eigen::MatrixBase<Derived>& probabilities, Rng& rng) {
  const double u = uniform01(rng) * probabilities.sum();
  double acc = 0.0;
  Eigen::Index last_positive = 0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    if (probabilities(i) <= 0.0) continue;
    acc += probabilities(i);
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

template <typename Derived>
double max_abs(const Eigen::DenseBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.derived().array().abs().maxCoeff());
}

/// max |A†A − I|.
template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> gram = u.adjoint() * u;
  return max_abs(gram - Matrix<Scalar>::Identity(u.cols(), u.cols()));
}

}  // namespace qgibbs
