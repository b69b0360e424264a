#pragma once

// Dense complex linear algebra over small multi-qubit registers.
//
// Bit ordering: qubit position 0 is the leftmost tensor factor, i.e. the most
// significant bit of a basis index. |q0 q1 ... q_{n-1}> has index
// sum_k q_k 2^{n-1-k}.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcarrier/errors.hpp"

namespace qcarrier {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Positions = std::vector<std::size_t>;

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kIdentityTol = 1e-12;
inline constexpr std::size_t kDefaultRegisterCap = 14;

namespace detail {

inline std::size_t qubits_for_dim(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw ValidationError("dimension " + std::to_string(dim) + " is not a power of two >= 2");
  }
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

inline void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw CapacityError("register of " + std::to_string(n) + " qubits exceeds cap of " +
                        std::to_string(cap));
  }
}

inline std::size_t bit_mask(std::size_t position, std::size_t n) {
  return std::size_t{1} << (n - 1 - position);
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void check_targets(const Positions& targets, std::size_t n, Eigen::Index u_dim) {
  if (targets.empty()) throw ArgumentError("no target qubits");
  if ((Eigen::Index{1} << targets.size()) != u_dim) {
    throw ArgumentError("gate acts on " + std::to_string(qubits_for_dim(u_dim)) +
                        " qubits but " + std::to_string(targets.size()) + " targets given");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= n) {
      throw ArgumentError("target " + std::to_string(targets[i]) + " out of range for " +
                          std::to_string(n) + " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw ArgumentError("duplicate target qubit");
    }
  }
}

// Applies u (acting on `targets`, targets[0] = most significant local bit) to
// every column of m from the left, in place.
inline void apply_left(Matrix& m, const Matrix& u, const Positions& targets, std::size_t n) {
  const std::size_t k = targets.size();
  const std::size_t local_dim = std::size_t{1} << k;
  std::vector<std::size_t> offsets(local_dim, 0);
  std::size_t all_mask = 0;
  for (std::size_t l = 0; l < local_dim; ++l) {
    for (std::size_t j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1U) offsets[l] |= bit_mask(targets[j], n);
    }
  }
  for (std::size_t j = 0; j < k; ++j) all_mask |= bit_mask(targets[j], n);

  const std::size_t dim = std::size_t{1} << n;
  Vector in(static_cast<Eigen::Index>(local_dim));
  Vector out(static_cast<Eigen::Index>(local_dim));
  for (std::size_t base = 0; base < dim; ++base) {
    if ((base & all_mask) != 0) continue;
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      for (std::size_t l = 0; l < local_dim; ++l) {
        in[static_cast<Eigen::Index>(l)] = m(static_cast<Eigen::Index>(base | offsets[l]), col);
      }
      out.noalias() = u * in;
      for (std::size_t l = 0; l < local_dim; ++l) {
        m(static_cast<Eigen::Index>(base | offsets[l]), col) = out[static_cast<Eigen::Index>(l)];
      }
    }
  }
}

// U m U^dagger without any validation of u or m.
inline Matrix conjugate(const Matrix& m, const Matrix& u, const Positions& targets, std::size_t n) {
  Matrix left = m;
  apply_left(left, u, targets, n);
  Matrix right = left.adjoint();
  apply_left(right, u, targets, n);
  return right.adjoint();
}

inline void check_unitary(const Matrix& u) {
  if (u.rows() != u.cols()) throw ValidationError("gate matrix is not square");
  const Matrix residual = u * u.adjoint() - Matrix::Identity(u.rows(), u.cols());
  if (max_abs(residual) > kStructuralTol) {
    throw ValidationError("gate matrix is not unitary (residual " +
                          std::to_string(max_abs(residual)) + ")");
  }
}

}  // namespace detail

/// Normalized amplitude vector over n qubits.
class PureState {
 public:
  explicit PureState(Vector amplitudes)
      : n_qubits_(detail::qubits_for_dim(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kStructuralTol) {
      throw ValidationError("state norm " + std::to_string(norm) + " differs from 1");
    }
  }

  /// Computational basis state from a bit string such as "0110".
  static PureState basis(std::string_view bits) {
    if (bits.empty()) throw ArgumentError("empty bit string");
    std::size_t index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw ArgumentError("bit string may only contain 0 and 1");
      index = (index << 1U) | static_cast<std::size_t>(c == '1');
    }
    Vector v = Vector::Zero(Eigen::Index{1} << bits.size());
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(std::move(v));
  }

  static PureState qubit(Complex alpha, Complex beta) {
    Vector v(2);
    v << alpha, beta;
    return PureState(std::move(v));
  }

  std::size_t n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  /// <this|other>
  Complex inner(const PureState& other) const {
    if (other.dim() != dim()) throw ArgumentError("inner product of states of different size");
    return amplitudes_.dot(other.amplitudes_);
  }

  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  std::size_t n_qubits_;
  Vector amplitudes_;
};

/// |<a|b>|^2; insensitive to global phase.
inline double overlap(const PureState& a, const PureState& b) { return std::norm(a.inner(b)); }

/// Returns an error message if m is not a valid density matrix, empty otherwise.
inline std::string density_defect(const Matrix& m, double tol = kStructuralTol) {
  if (m.rows() != m.cols()) return "matrix is not square";
  const double herm = detail::max_abs(m - m.adjoint());
  if (herm > tol) return "not Hermitian (residual " + std::to_string(herm) + ")";
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    return "trace " + std::to_string(tr.real()) + " differs from 1";
  }
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -tol) return "negative eigenvalue " + std::to_string(lowest);
  return {};
}

/// Mixed state on n qubits. Hermitian, unit trace and positive semidefinite.
class DensityMatrix {
 public:
  // Passkey for results of operations that preserve validity by construction.
  struct Unchecked {};

  explicit DensityMatrix(Matrix entries) : DensityMatrix(std::move(entries), Unchecked{}) {
    if (auto defect = density_defect(entries_); !defect.empty()) {
      throw ValidationError("invalid density matrix: " + defect);
    }
  }

  DensityMatrix(Matrix entries, Unchecked)
      : n_qubits_(detail::qubits_for_dim(entries.rows())), entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw ValidationError("matrix is not square");
  }

  explicit DensityMatrix(const PureState& psi)
      : n_qubits_(psi.n_qubits()), entries_(psi.projector()) {}

  static DensityMatrix maximally_mixed(std::size_t n) {
    const auto dim = Eigen::Index{1} << n;
    return {Matrix::Identity(dim, dim) / static_cast<double>(dim), Unchecked{}};
  }

  std::size_t n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  /// Largest entrywise difference; the unit of all "equal within tol" checks.
  double distance_max(const DensityMatrix& other) const {
    if (other.dim() != dim()) throw ArgumentError("dimension mismatch");
    return detail::max_abs(entries_ - other.entries_);
  }

 private:
  std::size_t n_qubits_;
  Matrix entries_;
};

/// Kronecker product with `a` as the left factor.
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b,
                            std::size_t cap = kDefaultRegisterCap) {
  detail::check_cap(a.n_qubits() + b.n_qubits(), cap);
  Matrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return {std::move(k), DensityMatrix::Unchecked{}};
}

inline PureState tensor(const PureState& a, const PureState& b,
                        std::size_t cap = kDefaultRegisterCap) {
  detail::check_cap(a.n_qubits() + b.n_qubits(), cap);
  Vector k = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return PureState(std::move(k));
}

/// U rho U^dagger with u acting on `targets` (targets[0] is u's leftmost factor).
inline DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u,
                                   const Positions& targets) {
  detail::check_unitary(u);
  detail::check_targets(targets, rho.n_qubits(), u.rows());
  return {detail::conjugate(rho.matrix(), u, targets, rho.n_qubits()), DensityMatrix::Unchecked{}};
}

inline PureState apply_unitary(const PureState& psi, const Matrix& u, const Positions& targets) {
  detail::check_unitary(u);
  detail::check_targets(targets, psi.n_qubits(), u.rows());
  Matrix column = psi.amplitudes();
  detail::apply_left(column, u, targets, psi.n_qubits());
  return PureState(Vector(column.col(0)));
}

/// Reduced state on `keep`, ordered by ascending position.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Positions keep) {
  const std::size_t n = rho.n_qubits();
  if (keep.empty()) throw ArgumentError("partial trace must keep at least one qubit");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw ArgumentError("duplicate qubit in keep set");
  }
  if (keep.back() >= n) throw ArgumentError("keep position out of range");

  Positions traced;
  for (std::size_t q = 0, j = 0; q < n; ++q) {
    if (j < keep.size() && keep[j] == q) {
      ++j;
    } else {
      traced.push_back(q);
    }
  }
  auto spread = [n](const Positions& positions) {
    const std::size_t count = std::size_t{1} << positions.size();
    std::vector<std::size_t> out(count, 0);
    for (std::size_t l = 0; l < count; ++l) {
      for (std::size_t j = 0; j < positions.size(); ++j) {
        if ((l >> (positions.size() - 1 - j)) & 1U) out[l] |= detail::bit_mask(positions[j], n);
      }
    }
    return out;
  };
  const auto kept_index = spread(keep);
  const auto traced_index = spread(traced);

  const auto out_dim = static_cast<Eigen::Index>(kept_index.size());
  Matrix out = Matrix::Zero(out_dim, out_dim);
  const Matrix& m = rho.matrix();
  for (Eigen::Index b = 0; b < out_dim; ++b) {
    for (Eigen::Index a = 0; a < out_dim; ++a) {
      Complex sum = 0.0;
      for (std::size_t t : traced_index) {
        sum += m(static_cast<Eigen::Index>(kept_index[a] | t),
                 static_cast<Eigen::Index>(kept_index[b] | t));
      }
      out(a, b) = sum;
    }
  }
  return {std::move(out), DensityMatrix::Unchecked{}};
}

/// <psi|rho|psi>.
inline double fidelity_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw ArgumentError("fidelity: dimension mismatch");
  const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  if (std::abs(f.imag()) > kIdentityTol) {
    throw ConsistencyError("fidelity has imaginary residue " + std::to_string(f.imag()));
  }
  return f.real();
}

/// Half the trace norm of a - b.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("trace distance: dimension mismatch");
  const Matrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace gates {

inline Matrix identity(std::size_t n_qubits = 1) {
  const auto dim = Eigen::Index{1} << n_qubits;
  return Matrix::Identity(dim, dim);
}

inline Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix h() {
  Matrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

/// Control is the first (leftmost) qubit.
inline Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

/// exp(i theta Z)
inline Matrix phase_kick(double theta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, theta);
  m(1, 1) = std::polar(1.0, -theta);
  return m;
}

}  // namespace gates

/// Full 2^n x 2^n operator of u acting on `targets`, identity elsewhere.
inline Matrix embed(const Matrix& u, const Positions& targets, std::size_t n) {
  detail::check_targets(targets, n, u.rows());
  Matrix full = gates::identity(n);
  detail::apply_left(full, u, targets, n);
  return full;
}

/// Ordered role labels for the qubits of a register; position = index in the list.
class RegisterLayout {
 public:
  explicit RegisterLayout(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ArgumentError("layout has no qubits");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second) {
        throw ArgumentError("duplicate layout label '" + labels_[i] + "'");
      }
    }
  }

  /// Receiver j (1-based) is labelled B, C, D, ...
  static std::string receiver_label(std::size_t j) {
    return std::string(1, static_cast<char>('A' + j));
  }
  /// Message slot j (1-based) is labelled "1", "2", ...
  static std::string slot_label(std::size_t j) { return std::to_string(j); }

  /// A, B, C, ..., 1, 2, ... for the sender, n receivers and n message slots.
  static RegisterLayout protocol(std::size_t n_receivers) {
    if (n_receivers < 2 || n_receivers > 25) {
      throw ArgumentError("receiver count must be in [2, 25]");
    }
    std::vector<std::string> labels{"A"};
    for (std::size_t j = 1; j <= n_receivers; ++j) labels.push_back(receiver_label(j));
    for (std::size_t j = 1; j <= n_receivers; ++j) labels.push_back(slot_label(j));
    return RegisterLayout(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool contains(const std::string& label) const { return index_.count(label) != 0; }

  std::size_t position(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw ArgumentError("layout has no qubit labelled '" + label + "'");
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace qcarrier
