#include "spinqec/dense.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinqec {

namespace {

std::size_t qubits_for_dim(Eigen::Index dim) {
  if (dim <= 0 || !std::has_single_bit(static_cast<std::size_t>(dim)))
    throw std::invalid_argument("DenseOperator: dimension must be a power of two");
  const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(dim)));
  if (n > DenseOperator::kMaxQubits) throw std::invalid_argument("DenseOperator: too many qubits");
  return n;
}

void require_same_dim(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("DenseOperator: dimension mismatch");
}

}  // namespace

DenseOperator::DenseOperator(Eigen::MatrixXcd m, double tol) : m_(std::move(m)), tol_(tol) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("DenseOperator: matrix not square");
  n_ = qubits_for_dim(m_.rows());
}

DenseOperator DenseOperator::identity(std::size_t n_qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return DenseOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

DenseOperator DenseOperator::from_pauli(const PauliString& p) {
  const std::size_t n = p.n_qubits();
  if (n > kMaxQubits) throw std::invalid_argument("DenseOperator: too many qubits");
  const std::size_t dim = std::size_t{1} << n;
  // Bit (n-1-q) of a basis index is qubit q.
  std::uint64_t xmask = 0, zmask = 0;
  int y_count = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    const bool x = (p.x_bits() >> q) & 1u, z = (p.z_bits() >> q) & 1u;
    if (x) xmask |= bit;
    if (z) zmask |= bit;
    if (x && z) ++y_count;
  }
  // Y = i X Z, so P = i^{#Y} X^x Z^z per qubit.
  static const cplx kI[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  const cplx global = kI[(p.phase() + static_cast<unsigned>(y_count)) & 3u];
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (std::uint64_t col = 0; col < dim; ++col) {
    const double sign = (std::popcount(col & zmask) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(col ^ xmask), static_cast<Eigen::Index>(col)) = global * sign;
  }
  return DenseOperator(std::move(m));
}

bool DenseOperator::is_unitary() const {
  const Eigen::MatrixXcd diff = m_.adjoint() * m_ - Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
  return diff.cwiseAbs().maxCoeff() < tol_;
}

DenseOperator DenseOperator::adjoint() const { return DenseOperator(m_.adjoint(), tol_); }

DenseOperator DenseOperator::operator*(const DenseOperator& rhs) const {
  require_same_dim(*this, rhs);
  return DenseOperator(m_ * rhs.m_, tol_);
}

DenseOperator DenseOperator::operator*(cplx s) const { return DenseOperator(m_ * s, tol_); }

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const auto& A = a.matrix();
  const auto& B = b.matrix();
  Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return DenseOperator(std::move(out), a.tolerance());
}

DenseOperator embed(const DenseOperator& op, const std::vector<std::size_t>& qubits,
                    std::size_t n_qubits) {
  const std::size_t k = op.n_qubits();
  if (qubits.size() != k) throw std::invalid_argument("embed: qubit count mismatch");
  if (n_qubits > DenseOperator::kMaxQubits) throw std::invalid_argument("embed: too many qubits");
  std::uint64_t target_mask = 0;
  for (std::size_t q : qubits) {
    if (q >= n_qubits) throw std::invalid_argument("embed: qubit out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
    if (target_mask & bit) throw std::invalid_argument("embed: repeated qubit");
    target_mask |= bit;
  }
  auto sub_index = [&](std::uint64_t full) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t bit = (full >> (n_qubits - 1 - qubits[i])) & 1u;
      s |= bit << (k - 1 - i);
    }
    return s;
  };
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (std::uint64_t r = 0; r < dim; ++r)
    for (std::uint64_t c = 0; c < dim; ++c)
      if ((r & ~target_mask) == (c & ~target_mask))
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            op(sub_index(r), sub_index(c));
  return DenseOperator(std::move(m), op.tolerance());
}

DenseOperator exp_hermitian(const DenseOperator& h, double theta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("exp_hermitian: eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::VectorXcd phases(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) phases(i) = std::exp(cplx(0, -theta * ev(i)));
  const Eigen::MatrixXcd& v = es.eigenvectors();
  return DenseOperator(v * phases.asDiagonal() * v.adjoint(), h.tolerance());
}

bool dense_equal_up_to_phase(const DenseOperator& a, const DenseOperator& b, double tol) {
  require_same_dim(a, b);
  Eigen::Index r = 0, c = 0;
  b.matrix().cwiseAbs().maxCoeff(&r, &c);
  const cplx bv = b.matrix()(r, c);
  const cplx av = a.matrix()(r, c);
  if (std::abs(bv) < tol) return a.matrix().cwiseAbs().maxCoeff() <= tol;
  if (std::abs(av) < tol) return false;
  const cplx ratio = av / bv;
  const cplx phi = ratio / std::abs(ratio);
  return (a.matrix() - phi * b.matrix()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<std::pair<PauliString, cplx>> pauli_decomposition(const DenseOperator& op,
                                                              double cutoff) {
  const std::size_t n = op.n_qubits();
  const std::size_t dim = op.dim();
  const auto& m = op.matrix();
  std::vector<std::pair<PauliString, cplx>> out;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < count; ++x) {
    for (std::uint64_t z = 0; z < count; ++z) {
      const PauliString p(n, x, z);
      const DenseOperator pd = DenseOperator::from_pauli(p);
      // Each column of a Pauli matrix has a single nonzero entry.
      cplx acc = 0;
      for (std::size_t col = 0; col < dim; ++col) {
        Eigen::Index row = 0;
        pd.matrix().col(static_cast<Eigen::Index>(col)).cwiseAbs().maxCoeff(&row);
        acc += std::conj(pd.matrix()(row, static_cast<Eigen::Index>(col))) *
               m(row, static_cast<Eigen::Index>(col));
      }
      const cplx coeff = acc / static_cast<double>(dim);
      if (std::abs(coeff) > cutoff) out.emplace_back(p, coeff);
    }
  }
  return out;
}

std::vector<std::pair<PauliString, double>> twirled_conjugation(const DenseOperator& u,
                                                                const PauliString& p) {
  if (u.n_qubits() != p.n_qubits()) throw std::invalid_argument("twirled_conjugation: size mismatch");
  const DenseOperator conj = u * DenseOperator::from_pauli(p) * u.adjoint();
  std::vector<std::pair<PauliString, double>> out;
  for (auto& [q, c] : pauli_decomposition(conj, 1e-9)) out.emplace_back(q, std::norm(c));
  return out;
}

namespace gates {

DenseOperator rz(double theta) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = std::exp(cplx(0, -theta / 2));
  m(1, 1) = std::exp(cplx(0, theta / 2));
  return DenseOperator(std::move(m));
}

DenseOperator ry(double theta) {
  Eigen::MatrixXcd m(2, 2);
  m << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  return DenseOperator(std::move(m));
}

DenseOperator hadamard() {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 1, 1, -1;
  return DenseOperator(m / std::sqrt(2.0));
}

DenseOperator cz() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m(3, 3) = -1;
  return DenseOperator(std::move(m));
}

DenseOperator swap() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return DenseOperator(std::move(m));
}

DenseOperator sqrt_swap() { return exp_hermitian(swap(), std::numbers::pi / 4); }

DenseOperator s_dipole() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = cplx(0, -1);
  m(2, 2) = cplx(0, -1);
  m(3, 3) = 1;
  return DenseOperator(std::move(m));
}

}  // namespace gates

}  // namespace spinqec
