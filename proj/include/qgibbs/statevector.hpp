#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qgibbs/errors.hpp"
#include "qgibbs/linalg.hpp"

namespace qgibbs {

/// Bits of `index` at the listed qubit positions, first listed qubit most
/// significant.
inline std::uint64_t gather_bits(std::uint64_t index, const std::vector<int>& qubits) {
  std::uint64_t value = 0;
  for (int q : qubits) value = (value << 1) | ((index >> q) & 1u);
  return value;
}

/// Mask with bits [offset, offset + bits) set.
constexpr std::uint64_t bit_range(int offset, int bits) {
  return bits == 0 ? 0 : (((std::uint64_t{1} << bits) - 1) << offset);
}

/// Applies Σ_b B_b ⊗ |b⟩⟨b|, where B_b acts on the contiguous qubits
/// [target_offset, target_offset + target_bits) and b is the configuration of
/// `controls`. Only basis indices carrying every bit of `enable_mask` are
/// touched, which gives the controlled version for free. Qubits above the
/// ones referenced are passive.
template <typename BlockScalar>
void apply_multiplexed(Eigen::Ref<ComplexVector> state, int target_offset, int target_bits,
                       const std::vector<int>& controls, const std::vector<Matrix<BlockScalar>>& blocks,
                       bool adjoint, std::uint64_t enable_mask = 0) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  const std::uint64_t width = std::uint64_t{1} << target_bits;
  if (target_offset + target_bits > 63 || dim < (width << target_offset) || dim % width != 0) {
    throw DimensionMismatch("state too small for the target register");
  }
  if (blocks.size() != (std::size_t{1} << controls.size())) {
    throw DimensionMismatch("multiplexor needs one block per control configuration");
  }
  const std::uint64_t low_mask = (std::uint64_t{1} << target_offset) - 1;
  const std::uint64_t n_bases = dim / width;

  if (target_bits == 1) {
    const std::uint64_t step = std::uint64_t{1} << target_offset;
    for (std::uint64_t i = 0; i < n_bases; ++i) {
      const std::uint64_t base = ((i & ~low_mask) << 1) | (i & low_mask);
      if ((base & enable_mask) != enable_mask) continue;
      const Matrix<BlockScalar>& b = blocks[controls.empty() ? 0 : gather_bits(base, controls)];
      const Complex a0 = state(static_cast<Eigen::Index>(base));
      const Complex a1 = state(static_cast<Eigen::Index>(base + step));
      if (adjoint) {
        state(static_cast<Eigen::Index>(base)) = Eigen::numext::conj(b(0, 0)) * a0 + Eigen::numext::conj(b(1, 0)) * a1;
        state(static_cast<Eigen::Index>(base + step)) =
            Eigen::numext::conj(b(0, 1)) * a0 + Eigen::numext::conj(b(1, 1)) * a1;
      } else {
        state(static_cast<Eigen::Index>(base)) = b(0, 0) * a0 + b(0, 1) * a1;
        state(static_cast<Eigen::Index>(base + step)) = b(1, 0) * a0 + b(1, 1) * a1;
      }
    }
    return;
  }

  ComplexVector local(static_cast<Eigen::Index>(width));
  for (std::uint64_t i = 0; i < n_bases; ++i) {
    const std::uint64_t base = ((i & ~low_mask) << target_bits) | (i & low_mask);
    if ((base & enable_mask) != enable_mask) continue;
    const Matrix<BlockScalar>& b = blocks[controls.empty() ? 0 : gather_bits(base, controls)];
    for (std::uint64_t l = 0; l < width; ++l) {
      local(static_cast<Eigen::Index>(l)) = state(static_cast<Eigen::Index>(base | (l << target_offset)));
    }
    const ComplexVector out = adjoint ? ComplexVector(b.adjoint().template cast<Complex>() * local)
                                      : ComplexVector(b.template cast<Complex>() * local);
    for (std::uint64_t l = 0; l < width; ++l) {
      state(static_cast<Eigen::Index>(base | (l << target_offset))) = out(static_cast<Eigen::Index>(l));
    }
  }
}

/// Uncontrolled block on a contiguous qubit range.
template <typename BlockScalar>
void apply_block(Eigen::Ref<ComplexVector> state, int target_offset, int target_bits,
                 const Matrix<BlockScalar>& block, bool adjoint = false, std::uint64_t enable_mask = 0) {
  apply_multiplexed<BlockScalar>(state, target_offset, target_bits, {}, {block}, adjoint, enable_mask);
}

/// Negates amplitudes whose index satisfies (index & select_mask) == value
/// and carries every bit of enable_mask.
inline void flip_sign_where(Eigen::Ref<ComplexVector> state, std::uint64_t select_mask, std::uint64_t value,
                            std::uint64_t enable_mask = 0) {
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    if ((idx & select_mask) == value && (idx & enable_mask) == enable_mask) state(i) = -state(i);
  }
}

/// Probability distribution of the register [offset, offset + bits).
inline RealVector register_marginal(const ComplexVector& state, int offset, int bits) {
  RealVector p = RealVector::Zero(Eigen::Index{1} << bits);
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    p(static_cast<Eigen::Index>((static_cast<std::uint64_t>(i) >> offset) & mask)) += std::norm(state(i));
  }
  return p;
}

/// H^{⊗n} as a dense matrix.
inline RealMatrix hadamard_transform(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RealMatrix h(dim, dim);
  const double scale = std::pow(2.0, -0.5 * n);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      h(r, c) = (std::popcount(static_cast<std::uint64_t>(r & c)) % 2 ? -scale : scale);
    }
  }
  return h;
}

/// F(j, k) = e^{2πi jk / 2^n} / √(2^n).
inline ComplexMatrix fourier_transform(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix f(dim, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % dim) / static_cast<double>(dim);
      f(j, k) = std::polar(scale, angle);
    }
  }
  return f;
}

}  // namespace qgibbs
