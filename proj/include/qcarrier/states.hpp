#pragma once

// Named states of the carrier protocol: parity states, GHZ states and the
// GHZ octet, and the two message encodings.

#include <cmath>
#include <cstddef>
#include <string>

#include "qcarrier/densekernel.hpp"

namespace qcarrier {

struct ParityBit {
  bool value = false;

  constexpr ParityBit negated() const { return ParityBit{!value}; }
  constexpr bool operator==(const ParityBit&) const = default;
};

inline constexpr ParityBit kEven{false};
inline constexpr ParityBit kOdd{true};

enum class GhzSign { plus, minus };

// Site whose bit is flipped relative to |000>; `zero` is the unflipped G_0.
enum class GhzSite { zero, A, B, C };

struct GhzLabel {
  GhzSite site = GhzSite::zero;
  GhzSign sign = GhzSign::plus;

  constexpr bool operator==(const GhzLabel&) const = default;

  std::string name() const {
    static constexpr const char* kSites[] = {"0", "A", "B", "C"};
    return std::string("G") + kSites[static_cast<int>(site)] + (sign == GhzSign::minus ? "'" : "");
  }
};

namespace detail {

inline void check_party_count(std::size_t n, std::size_t cap) {
  if (n < 2) throw ArgumentError("need at least 2 qubits, got " + std::to_string(n));
  check_cap(n, cap);
}

inline Vector basis_vector(std::size_t dim, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return v;
}

}  // namespace detail

/// Uniform superposition of all n-bit strings with parity q, built by the
/// recursion |q_k> = (|0>|q_{k-1}> + |1>|~q_{k-1}>)/sqrt(2) from |q_1> = |q>.
inline PureState parity_state(std::size_t n, ParityBit q, std::size_t cap = kDefaultRegisterCap) {
  detail::check_party_count(n, cap);
  const double s = 1.0 / std::sqrt(2.0);
  Vector zero = detail::basis_vector(2, 0);
  Vector one = detail::basis_vector(2, 1);
  Vector even = zero;
  Vector odd = one;
  for (std::size_t k = 2; k <= n; ++k) {
    Vector next_even = s * (Eigen::kroneckerProduct(zero, even) + Eigen::kroneckerProduct(one, odd));
    Vector next_odd = s * (Eigen::kroneckerProduct(zero, odd) + Eigen::kroneckerProduct(one, even));
    even = std::move(next_even);
    odd = std::move(next_odd);
  }
  return PureState(q.value ? std::move(odd) : std::move(even));
}

/// (|0...0> +- |1...1>)/sqrt(2)
inline PureState ghz_state(std::size_t n, GhzSign sign = GhzSign::plus,
                           std::size_t cap = kDefaultRegisterCap) {
  detail::check_party_count(n, cap);
  const std::size_t dim = std::size_t{1} << n;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  const double s = 1.0 / std::sqrt(2.0);
  v[0] = s;
  v[static_cast<Eigen::Index>(dim - 1)] = sign == GhzSign::plus ? s : -s;
  return PureState(std::move(v));
}

/// One of the eight three-qubit GHZ basis states G_i / G'_i.
inline PureState ghz_basis_state(GhzLabel label) {
  // Index of the |s> component; its complement carries the sign.
  static constexpr std::size_t kFlipped[] = {0b000, 0b100, 0b010, 0b001};
  const std::size_t first = kFlipped[static_cast<int>(label.site)];
  const std::size_t second = first ^ 0b111U;
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(8);
  v[static_cast<Eigen::Index>(first)] = s;
  v[static_cast<Eigen::Index>(second)] = label.sign == GhzSign::plus ? s : -s;
  return PureState(std::move(v));
}

inline constexpr GhzLabel kGhzOctet[] = {
    {GhzSite::zero, GhzSign::plus}, {GhzSite::A, GhzSign::plus},
    {GhzSite::B, GhzSign::plus},    {GhzSite::C, GhzSign::plus},
    {GhzSite::zero, GhzSign::minus}, {GhzSite::A, GhzSign::minus},
    {GhzSite::B, GhzSign::minus},    {GhzSite::C, GhzSign::minus},
};

namespace detail {

inline void check_single_qubit(const PureState& psi) {
  if (psi.n_qubits() != 1) throw ArgumentError("message must be a single-qubit state");
}

}  // namespace detail

/// alpha|0...0> + beta|1...1>
inline PureState encode_product(const PureState& psi, std::size_t n,
                                std::size_t cap = kDefaultRegisterCap) {
  detail::check_single_qubit(psi);
  if (n < 1) throw ArgumentError("product encoding needs at least one slot");
  detail::check_cap(n, cap);
  const std::size_t dim = std::size_t{1} << n;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v[0] = psi[0];
  v[static_cast<Eigen::Index>(dim - 1)] = psi[1];
  return PureState(std::move(v));
}

/// alpha|0_n> + beta|1_n> over the parity states.
inline PureState encode_parity(const PureState& psi, std::size_t n,
                               std::size_t cap = kDefaultRegisterCap) {
  detail::check_single_qubit(psi);
  detail::check_party_count(n, cap);
  Vector v = psi[0] * parity_state(n, kEven, cap).amplitudes() +
             psi[1] * parity_state(n, kOdd, cap).amplitudes();
  return PureState(std::move(v));
}

/// H on every qubit.
inline PureState hadamard_all(const PureState& psi) {
  Matrix column = psi.amplitudes();
  for (std::size_t q = 0; q < psi.n_qubits(); ++q) {
    detail::apply_left(column, gates::h(), {q}, psi.n_qubits());
  }
  return PureState(Vector(column.col(0)));
}

}  // namespace qcarrier
