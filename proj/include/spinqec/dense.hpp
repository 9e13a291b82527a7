#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinqec/pauli.hpp"

namespace spinqec {

using cplx = std::complex<double>;

// Small dense operator used as a correctness oracle. Qubit 0 is the most
// significant tensor factor, matching the left-to-right order of PauliString
// letters.
class DenseOperator {
 public:
  static constexpr std::size_t kMaxQubits = 6;

  DenseOperator() = default;
  explicit DenseOperator(Eigen::MatrixXcd m, double tol = 1e-10);

  static DenseOperator identity(std::size_t n_qubits);
  static DenseOperator from_pauli(const PauliString& p);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t n_qubits() const { return n_; }
  double tolerance() const { return tol_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  cplx operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  bool is_unitary() const;
  DenseOperator adjoint() const;
  DenseOperator operator*(const DenseOperator& rhs) const;
  DenseOperator operator*(cplx s) const;

 private:
  Eigen::MatrixXcd m_;
  std::size_t n_ = 0;
  double tol_ = 1e-10;
};

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

// Places a k-qubit operator on the listed qubits of an n-qubit register.
DenseOperator embed(const DenseOperator& op, const std::vector<std::size_t>& qubits,
                    std::size_t n_qubits);

// exp(-i * theta * h) for Hermitian h.
DenseOperator exp_hermitian(const DenseOperator& h, double theta);

bool dense_equal_up_to_phase(const DenseOperator& a, const DenseOperator& b, double tol);

// Coefficients c_P of op = sum_P c_P P over all Paulis with |c_P| > cutoff.
std::vector<std::pair<PauliString, cplx>> pauli_decomposition(const DenseOperator& op,
                                                              double cutoff = 1e-12);

// Pauli twirl of the map rho -> U P U^dagger: probabilities |c_Q|^2 of the
// Pauli expansion of U P U^dagger. Exact when the result is itself a Pauli.
std::vector<std::pair<PauliString, double>> twirled_conjugation(const DenseOperator& u,
                                                                const PauliString& p);

namespace gates {

DenseOperator rz(double theta);  // diag(e^{-i theta/2}, e^{i theta/2})
DenseOperator ry(double theta);  // exp(-i theta Y / 2)
DenseOperator hadamard();
DenseOperator cz();
DenseOperator swap();
DenseOperator sqrt_swap();       // exp(-i pi/4 SWAP)
DenseOperator s_dipole();        // diag(1, -i, -i, 1)

}  // namespace gates

}  // namespace spinqec
