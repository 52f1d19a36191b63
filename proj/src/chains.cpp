#include "qgibbs/chains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qgibbs {

namespace {

void require_kernel_size(const BayesianNetwork& net) {
  if (net.n_bits() > kMaxKernelBits) {
    throw DimensionMismatch("dense kernels need nb <= 8, network has nb = " + std::to_string(net.n_bits()));
  }
}

// Accumulates the sweep product column by column. `order` lists the nodes in
// resampling order; branches of zero weight are pruned so only reachable
// conditioning events are evaluated.
void sweep_column(const BayesianNetwork& net, const std::vector<int>& order, std::size_t step,
                  Assignment& state, double weight, Eigen::Index column, RealMatrix& out) {
  if (step == order.size()) {
    out(static_cast<Eigen::Index>(pack(net, state)), column) += weight;
    return;
  }
  const int i = order[step];
  const int saved = state[static_cast<std::size_t>(i)];
  const RealVector cond = full_conditional(net, i, state);
  for (Eigen::Index v = 0; v < cond.size(); ++v) {
    if (cond(v) == 0.0) continue;
    state[static_cast<std::size_t>(i)] = static_cast<int>(v);
    sweep_column(net, order, step + 1, state, weight * cond(v), column, out);
  }
  state[static_cast<std::size_t>(i)] = saved;
}

TransitionMatrix build_sweep(const BayesianNetwork& net, const std::vector<int>& order) {
  require_kernel_size(net);
  const auto n = static_cast<Eigen::Index>(net.n_states());
  TransitionMatrix m{RealMatrix::Zero(n, n), KernelKind::Stochastic};
  for (Eigen::Index x = 0; x < n; ++x) {
    Assignment state = unpack(net, static_cast<StateIndex>(x));
    sweep_column(net, order, 0, state, 1.0, x, m.entries);
  }
  return m;
}

struct Eigenpairs {
  ComplexVector values;
  ComplexMatrix vectors;
  Eigen::Index core = 0;
};

// Orthonormal basis of the Fitting core range(M^n): iterate range(M Q) with a
// rank cut until the dimension stops shrinking.
RealMatrix fitting_core(const RealMatrix& m) {
  const double scale = std::max(1.0, m.norm());
  RealMatrix q = RealMatrix::Identity(m.rows(), m.cols());
  for (;;) {
    const RealMatrix y = m * q;
    Eigen::JacobiSVD<RealMatrix> svd(y, Eigen::ComputeThinU);
    const RealVector& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > 1e-10 * scale) ++rank;
    if (rank == q.cols()) return q;
    q = svd.matrixU().leftCols(rank);
    if (rank == 0) return q;
  }
}

Eigenpairs general_eigenpairs(const RealMatrix& m) {
  const Eigen::Index n = m.rows();
  Eigenpairs out;
  const RealMatrix core = fitting_core(m);
  out.core = core.cols();
  out.values = ComplexVector::Zero(n);
  out.vectors = ComplexMatrix::Zero(n, n);
  if (out.core > 0) {
    // range(core) is M-invariant, so reduced eigenvectors lift exactly.
    const RealMatrix reduced = core.transpose() * m * core;
    Eigen::EigenSolver<RealMatrix> solver(reduced, true);
    out.values.head(out.core) = solver.eigenvalues();
    out.vectors.leftCols(out.core) = core.cast<Complex>() * solver.eigenvectors();
  }
  if (out.core < n) {
    // Nilpotent part: eigenvalue 0, usually defective, so only the null space
    // supplies eigenvectors. They are reused cyclically.
    Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, m.norm());
    Eigen::Index kernel = 0;
    while (kernel < n && s(n - 1 - kernel) <= cut) ++kernel;
    kernel = std::max<Eigen::Index>(kernel, 1);
    for (Eigen::Index j = out.core; j < n; ++j) {
      out.vectors.col(j) = svd.matrixV().col(n - 1 - (j - out.core) % kernel).cast<Complex>();
    }
  }
  return out;
}

bool is_symmetric(const RealMatrix& m) {
  return max_abs(m - m.transpose()) <= 1e-13 * std::max(1.0, max_abs(m));
}

// Descending by |m|, then real part, then imaginary part; moduli within 1e-12
// count as ties.
bool spectral_before(const Complex& a, const Complex& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (std::abs(ma - mb) > 1e-12) return ma > mb;
  if (std::abs(a.real() - b.real()) > 1e-12) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

TransitionMatrix build_M1(const BayesianNetwork& net) {
  std::vector<int> order(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  return build_sweep(net, order);
}

TransitionMatrix build_M2(const BayesianNetwork& net) {
  std::vector<int> order(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) order[static_cast<std::size_t>(i)] = net.size() - 1 - i;
  return build_sweep(net, order);
}

TransitionMatrix build_lambda(const TransitionMatrix& m) {
  return {m.entries.cwiseSqrt(), KernelKind::NonStochastic};
}

TransitionMatrix build_M_hyb(const TransitionMatrix& m1, const TransitionMatrix& m2) {
  if (m1.size() != m2.size()) throw DimensionMismatch("M1 and M2 differ in size");
  return {(m2.entries.transpose().cwiseProduct(m1.entries)).cwiseSqrt(), KernelKind::NonStochastic};
}

double check_pair_detailed_balance(const TransitionMatrix& m1, const TransitionMatrix& m2,
                                   const RealVector& pi) {
  if (m1.size() != m2.size() || m1.size() != pi.size()) throw DimensionMismatch("kernel/π size mismatch");
  // Column scaling: (M1 D)(y,x) = M1(y|x)π(x); (M2 D)ᵀ(y,x) = M2(x|y)π(y).
  const RealMatrix lhs = m1.entries * pi.asDiagonal();
  const RealMatrix rhs = (m2.entries * pi.asDiagonal()).transpose();
  return max_abs(lhs - rhs);
}

SpectralData spectrum(const RealMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionMismatch("spectrum needs a square matrix");
  const Eigen::Index n = m.rows();
  SpectralData out;

  ComplexVector values;
  ComplexMatrix vectors;
  out.self_adjoint = is_symmetric(m);
  if (out.self_adjoint) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m);
    values = solver.eigenvalues().cast<Complex>();
    vectors = solver.eigenvectors().cast<Complex>();
    out.core_dimension = n;
  } else {
    Eigenpairs pairs = general_eigenpairs(m);
    values = std::move(pairs.values);
    vectors = std::move(pairs.vectors);
    out.core_dimension = pairs.core;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return spectral_before(values(a), values(b)); });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = values(order[static_cast<std::size_t>(j)]);
    ComplexVector v = vectors.col(order[static_cast<std::size_t>(j)]);
    v.normalize();
    // Phase convention: column 0 has a positive sum, the others have their
    // largest-modulus entry real and positive.
    Complex anchor;
    if (j == 0) {
      anchor = v.sum();
    } else {
      Eigen::Index k = 0;
      v.cwiseAbs().maxCoeff(&k);
      anchor = v(k);
    }
    if (std::abs(anchor) > 0.0) v *= std::conj(anchor) / std::abs(anchor);
    out.eigenvectors.col(j) = v;
  }

  if (std::abs(out.eigenvalues(0) - 1.0) > kEigenTol) {
    throw SpectrumError("leading eigenvalue is not 1");
  }
  if (n > 1 && std::abs(out.eigenvalues(1)) > 1.0 - kEigenTol) {
    throw DegenerateTopEigenvalue("second eigenvalue has modulus ~1: chain is reducible or periodic");
  }
  out.eigenvalues(0) = 1.0;

  out.phi.resize(n);
  out.eta.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex mj = out.eigenvalues(j);
    const double modulus = std::min(1.0, std::abs(mj));
    out.phi(j) = std::acos(modulus);
    // Phase of a roundoff-sized eigenvalue is noise.
    double eta = std::abs(mj) > kAlgebraicTol ? std::arg(mj) : 0.0;
    if (eta < 0.0) eta += 2.0 * std::numbers::pi;
    if (eta >= 2.0 * std::numbers::pi) eta = 0.0;
    out.eta(j) = eta;
    out.reconstruction_residual = std::max(
        out.reconstruction_residual, std::abs(std::polar(1.0, out.eta(j)) * std::cos(out.phi(j)) - mj));
  }
  out.gap = n > 1 ? 1.0 - std::abs(out.eigenvalues(1)) : 1.0;

  const ComplexMatrix mc = m.cast<Complex>();
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenpair_residual = std::max(
        out.eigenpair_residual, (mc * out.eigenvectors.col(j) - out.eigenvalues(j) * out.eigenvectors.col(j)).norm());
  }
  out.orthonormality_residual =
      max_abs(ComplexMatrix(out.eigenvectors.adjoint() * out.eigenvectors) - ComplexMatrix::Identity(n, n));
  out.normality_residual = max_abs(RealMatrix(m * m.transpose() - m.transpose() * m));
  return out;
}

double eigenvalue_multiset_distance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw LengthMismatch("eigenvalue lists differ in length");
  std::vector<Complex> rest(b.data(), b.data() + b.size());
  std::vector<Complex> lhs(a.data(), a.data() + a.size());
  std::sort(lhs.begin(), lhs.end(), spectral_before);
  double worst = 0.0;
  for (const Complex& z : lhs) {
    auto it = std::min_element(rest.begin(), rest.end(),
                               [&](const Complex& u, const Complex& v) { return std::abs(u - z) < std::abs(v - z); });
    worst = std::max(worst, std::abs(*it - z));
    rest.erase(it);
  }
  return worst;
}

SpectraComparison verify_spectra_equal(const TransitionMatrix& m1, const TransitionMatrix& m2,
                                       const TransitionMatrix& m_hyb, const RealVector& pi) {
  if ((pi.array() <= 0.0).any()) throw SingularPi("π has a zero entry; D is not invertible");
  SpectraComparison out;
  const SpectralData s1 = spectrum(m1), s2 = spectrum(m2), sh = spectrum(m_hyb);
  out.eigenvalue_mismatch = std::max({eigenvalue_multiset_distance(s1.eigenvalues, s2.eigenvalues),
                                      eigenvalue_multiset_distance(s1.eigenvalues, sh.eigenvalues),
                                      eigenvalue_multiset_distance(s2.eigenvalues, sh.eigenvalues)});
  const RealVector sqrt_pi = pi.cwiseSqrt();
  out.m2_similarity_residual =
      max_abs(RealMatrix(m2.entries.transpose() - pi.cwiseInverse().asDiagonal() * m1.entries * pi.asDiagonal()));
  out.hyb_similarity_residual = max_abs(RealMatrix(
      m_hyb.entries.transpose() - sqrt_pi.cwiseInverse().asDiagonal() * m2.entries * sqrt_pi.asDiagonal()));
  return out;
}

RealVector hybrid_singular_values(const TransitionMatrix& m_hyb) {
  Eigen::JacobiSVD<RealMatrix> svd(m_hyb.entries);
  return svd.singularValues();
}

Assignment classical_gibbs_step(const BayesianNetwork& net, const Assignment& x, Rng& rng) {
  Assignment y = x;
  for (int i = 0; i < net.size(); ++i) {
    const RealVector cond = full_conditional(net, i, y);
    y[static_cast<std::size_t>(i)] = static_cast<int>(sample_index(cond, rng));
  }
  return y;
}

void write_csv(std::ostream& out, const TransitionMatrix& m) {
  out << "y,x,value\n";
  const auto old = out.precision(17);
  for (Eigen::Index y = 0; y < m.size(); ++y) {
    for (Eigen::Index x = 0; x < m.size(); ++x) out << y << ',' << x << ',' << m(y, x) << '\n';
  }
  out.precision(old);
}

}  // namespace qgibbs
