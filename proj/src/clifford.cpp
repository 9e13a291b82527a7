#include "spinqec/clifford.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinqec {

CliffordMap::CliffordMap(std::vector<PauliString> x_images, std::vector<PauliString> z_images)
    : x_images_(std::move(x_images)), z_images_(std::move(z_images)) {
  const std::size_t n = x_images_.size();
  if (z_images_.size() != n) throw std::invalid_argument("CliffordMap: image count mismatch");
  for (std::size_t q = 0; q < n; ++q) {
    if (x_images_[q].n_qubits() != n || z_images_[q].n_qubits() != n)
      throw std::invalid_argument("CliffordMap: image size mismatch");
    // Images must be Hermitian.
    if (x_images_[q].phase() & 1u || z_images_[q].phase() & 1u)
      throw std::invalid_argument("CliffordMap: non-Hermitian image");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int xx = symplectic_product(x_images_[i], x_images_[j]);
      const int zz = symplectic_product(z_images_[i], z_images_[j]);
      const int xz = symplectic_product(x_images_[i], z_images_[j]);
      if (xx != 0 || zz != 0 || xz != (i == j ? 1 : 0))
        throw std::invalid_argument("CliffordMap: images break commutation relations");
    }
  }
}

CliffordMap CliffordMap::identity(std::size_t n_qubits) {
  std::vector<PauliString> xs, zs;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    xs.push_back(PauliString::single(n_qubits, q, 'X'));
    zs.push_back(PauliString::single(n_qubits, q, 'Z'));
  }
  return CliffordMap(std::move(xs), std::move(zs));
}

CliffordMap CliffordMap::from_dense(const DenseOperator& u) {
  const std::size_t n = u.n_qubits();
  auto image = [&](const PauliString& p) {
    const DenseOperator conj = u * DenseOperator::from_pauli(p) * u.adjoint();
    const auto terms = pauli_decomposition(conj, 1e-9);
    if (terms.size() != 1) throw std::invalid_argument("CliffordMap::from_dense: not Clifford");
    const auto& [q, c] = terms.front();
    unsigned phase = 0;
    if (std::abs(c - cplx(1, 0)) < 1e-9) phase = 0;
    else if (std::abs(c - cplx(-1, 0)) < 1e-9) phase = 2;
    else throw std::invalid_argument("CliffordMap::from_dense: not Clifford");
    PauliString out = q;
    out.set_phase(phase);
    return out;
  };
  std::vector<PauliString> xs, zs;
  for (std::size_t q = 0; q < n; ++q) {
    xs.push_back(image(PauliString::single(n, q, 'X')));
    zs.push_back(image(PauliString::single(n, q, 'Z')));
  }
  return CliffordMap(std::move(xs), std::move(zs));
}

CliffordMap CliffordMap::cz(std::size_t n_qubits, std::size_t a, std::size_t b) {
  if (a == b || a >= n_qubits || b >= n_qubits) throw std::invalid_argument("CliffordMap::cz: bad qubits");
  CliffordMap m = identity(n_qubits);
  m.x_images_[a].set_letter(b, 'Z');
  m.x_images_[b].set_letter(a, 'Z');
  return m;
}

CliffordMap CliffordMap::swap(std::size_t n_qubits, std::size_t a, std::size_t b) {
  if (a == b || a >= n_qubits || b >= n_qubits) throw std::invalid_argument("CliffordMap::swap: bad qubits");
  CliffordMap m = identity(n_qubits);
  std::swap(m.x_images_[a], m.x_images_[b]);
  std::swap(m.z_images_[a], m.z_images_[b]);
  return m;
}

CliffordMap CliffordMap::ry_half_pi(std::size_t n_qubits, std::size_t q, int sign) {
  if (q >= n_qubits) throw std::invalid_argument("CliffordMap::ry_half_pi: bad qubit");
  // Ry(+pi/2): X -> -Z, Z -> X.  Ry(-pi/2): X -> Z, Z -> -X.
  CliffordMap m = identity(n_qubits);
  m.x_images_[q] = PauliString::single(n_qubits, q, 'Z');
  m.z_images_[q] = PauliString::single(n_qubits, q, 'X');
  if (sign > 0) m.x_images_[q].set_phase(2);
  else m.z_images_[q].set_phase(2);
  return m;
}

CliffordMap CliffordMap::then(const CliffordMap& next) const {
  if (next.n_qubits() != n_qubits()) throw std::invalid_argument("CliffordMap: size mismatch");
  std::vector<PauliString> xs, zs;
  for (std::size_t q = 0; q < n_qubits(); ++q) {
    xs.push_back(conjugate_through(next, x_images_[q]));
    zs.push_back(conjugate_through(next, z_images_[q]));
  }
  return CliffordMap(std::move(xs), std::move(zs));
}

PauliString conjugate_through(const CliffordMap& map, const PauliString& p) {
  const std::size_t n = p.n_qubits();
  if (map.n_qubits() != n) throw std::invalid_argument("conjugate_through: size mismatch");
  // p = i^{phase + #Y} prod_q X_q^{x_q} Z_q^{z_q}, expanded in qubit order.
  unsigned k = p.phase();
  PauliString out(n);
  for (std::size_t q = 0; q < n; ++q) {
    const bool x = (p.x_bits() >> q) & 1u;
    const bool z = (p.z_bits() >> q) & 1u;
    if (x && z) ++k;
    if (x) out = out * map.x_image(q);
    if (z) out = out * map.z_image(q);
  }
  out.set_phase(out.phase() + k);
  return out;
}

}  // namespace spinqec
