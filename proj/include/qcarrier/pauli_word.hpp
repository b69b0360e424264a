#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "qcarrier/densekernel.hpp"

namespace qcarrier {

/// n-qubit Pauli operator i^k * (tensor of I/X/Y/Z), at most 64 qubits.
///
/// Stored as i^e * X^x Z^z with bit q of each mask addressing position q.
/// Since Y = iXZ, the tensor-of-sigmas phase is k = e - |x & z| (mod 4).
class PauliWord {
 public:
  static constexpr std::size_t kMaxQubits = 64;

  PauliWord() = default;
  explicit PauliWord(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits > kMaxQubits) throw CapacityError("Pauli word limited to 64 qubits");
  }

  /// Parses an optional phase prefix (+, -, i, -i, +i) followed by one of
  /// I/X/Y/Z (or _ for I) per qubit: "XIZ", "-YY", "iZ".
  static PauliWord parse(std::string_view text) {
    int k = 0;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
      if (text[0] == '-') k = 2;
      text.remove_prefix(1);
    }
    if (!text.empty() && text[0] == 'i') {
      k += 1;
      text.remove_prefix(1);
    }
    PauliWord w(text.size());
    for (std::size_t q = 0; q < text.size(); ++q) {
      switch (text[q]) {
        case 'I':
        case '_':
          break;
        case 'X':
          w.x_ |= bit(q);
          break;
        case 'Z':
          w.z_ |= bit(q);
          break;
        case 'Y':
          w.x_ |= bit(q);
          w.z_ |= bit(q);
          break;
        default:
          throw ArgumentError(std::string("bad Pauli character '") + text[q] + "'");
      }
    }
    w.set_sigma_phase(k);
    return w;
  }

  static PauliWord single(std::size_t n_qubits, std::size_t q, char pauli) {
    std::string s(n_qubits, 'I');
    if (q >= n_qubits) throw ArgumentError("Pauli position out of range");
    s[q] = pauli;
    return parse(s);
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  /// Exponent k of the i^k prefactor in front of the tensor of sigmas.
  int sigma_phase() const {
    return (xz_phase_ - std::popcount(x_ & z_) % 4 + 4) % 4;
  }
  bool is_hermitian() const { return sigma_phase() % 2 == 0; }
  /// +1 or -1 for Hermitian words.
  int sign() const {
    if (!is_hermitian()) throw ArgumentError("sign of a non-Hermitian Pauli word");
    return sigma_phase() == 0 ? 1 : -1;
  }

  bool is_identity_up_to_phase() const { return x_ == 0 && z_ == 0; }
  std::size_t weight() const { return static_cast<std::size_t>(std::popcount(x_ | z_)); }

  char at(std::size_t q) const {
    const bool x = (x_ >> q) & 1U;
    const bool z = (z_ >> q) & 1U;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }

  std::string to_string() const {
    static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
    std::string s = kPrefix[sigma_phase()];
    for (std::size_t q = 0; q < n_qubits_; ++q) s += at(q);
    return s;
  }

  PauliWord operator*(const PauliWord& rhs) const {
    if (rhs.n_qubits_ != n_qubits_) throw ArgumentError("Pauli product of different sizes");
    PauliWord out(n_qubits_);
    // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
    out.x_ = x_ ^ rhs.x_;
    out.z_ = z_ ^ rhs.z_;
    out.xz_phase_ = (xz_phase_ + rhs.xz_phase_ + 2 * (std::popcount(z_ & rhs.x_) % 2)) % 4;
    return out;
  }

  bool operator==(const PauliWord& other) const {
    return n_qubits_ == other.n_qubits_ && x_ == other.x_ && z_ == other.z_ &&
           xz_phase_ == other.xz_phase_;
  }

  /// Factors on `positions` only (in their order), keeping the sigma phase.
  PauliWord restricted(const Positions& positions) const {
    PauliWord out(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
      if ((x_ >> positions[j]) & 1U) out.x_ |= bit(j);
      if ((z_ >> positions[j]) & 1U) out.z_ |= bit(j);
    }
    out.set_sigma_phase(sigma_phase());
    return out;
  }

  /// Dense 2^n x 2^n matrix, position 0 as the leftmost factor.
  Matrix to_matrix() const {
    Matrix m = Matrix::Identity(1, 1);
    for (std::size_t q = 0; q < n_qubits_; ++q) {
      Matrix factor;
      switch (at(q)) {
        case 'X':
          factor = gates::x();
          break;
        case 'Y':
          factor = gates::y();
          break;
        case 'Z':
          factor = gates::z();
          break;
        default:
          factor = gates::identity();
      }
      m = Eigen::kroneckerProduct(m, factor).eval();
    }
    static constexpr Complex kPhase[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPhase[sigma_phase()] * m;
  }

  // Clifford updates, in the X^x Z^z form. Each maps w to U w U^dagger.
  void conjugate_h(std::size_t q) {
    const std::uint64_t b = bit(q);
    const bool x = x_ & b;
    const bool z = z_ & b;
    if (x && z) xz_phase_ = (xz_phase_ + 2) % 4;  // H XZ H = ZX = -XZ
    x_ = (x_ & ~b) | (z ? b : 0);
    z_ = (z_ & ~b) | (x ? b : 0);
  }
  void conjugate_cnot(std::size_t control, std::size_t target) {
    if ((x_ >> control) & 1U) x_ ^= bit(target);
    if ((z_ >> target) & 1U) z_ ^= bit(control);
  }
  void conjugate_x(std::size_t q) {
    if ((z_ >> q) & 1U) xz_phase_ = (xz_phase_ + 2) % 4;
  }
  void conjugate_z(std::size_t q) {
    if ((x_ >> q) & 1U) xz_phase_ = (xz_phase_ + 2) % 4;
  }

 private:
  static constexpr std::uint64_t bit(std::size_t q) { return std::uint64_t{1} << q; }

  void set_sigma_phase(int k) { xz_phase_ = (k + std::popcount(x_ & z_)) % 4; }

  std::size_t n_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int xz_phase_ = 0;
};

}  // namespace qcarrier
