#pragma once

// Three-qubit bit-flip repetition code over the protocol's bit-flip channel.

#include <functional>

#include "qcarrier/channel.hpp"
#include "qcarrier/densekernel.hpp"
#include "qcarrier/protocol.hpp"

namespace qcarrier {

/// Sends qubit `qubit` of a code state through one channel use.
using CodeQubitChannel = std::function<DensityMatrix(const DensityMatrix& code, std::size_t qubit)>;

/// P_L = 3q^2 - 2q^3: a logical flip needs at least two of three physical flips.
inline double logical_error_rate(double q) {
  detail::check_probability(q, 1.0, "bit-flip");
  return 3.0 * q * q - 2.0 * q * q * q;
}

/// (1-q) rho + q X rho X on one qubit.
inline CodeQubitChannel bit_flip_channel(double q) {
  detail::check_probability(q, 1.0, "bit-flip");
  return [q](const DensityMatrix& code, std::size_t qubit) {
    const Matrix flipped = apply_unitary(code, gates::x(), {qubit}).matrix();
    return DensityMatrix((1.0 - q) * code.matrix() + q * flipped, DensityMatrix::Unchecked{});
  };
}

namespace detail {

inline DensityMatrix repetition_encode(const DensityMatrix& logical) {
  DensityMatrix code = tensor(logical, DensityMatrix(PureState::basis("00")));
  return apply_circuit(code, {Gate::cnot(0, 1), Gate::cnot(0, 2)});
}

// Sum over syndrome subspaces of C_s P_s rho P_s C_s^dagger.
inline DensityMatrix majority_recover(const DensityMatrix& code) {
  // Basis index pairs {s, ~s} per syndrome, with the qubit to flip back.
  struct Sector {
    std::size_t a, b;
    int flip;  // -1: no correction
  };
  static constexpr Sector kSectors[] = {
      {0b000, 0b111, -1}, {0b100, 0b011, 0}, {0b010, 0b101, 1}, {0b001, 0b110, 2}};
  Matrix out = Matrix::Zero(8, 8);
  for (const Sector& s : kSectors) {
    Matrix projector = Matrix::Zero(8, 8);
    projector(static_cast<Eigen::Index>(s.a), static_cast<Eigen::Index>(s.a)) = 1.0;
    projector(static_cast<Eigen::Index>(s.b), static_cast<Eigen::Index>(s.b)) = 1.0;
    Matrix op = projector;
    if (s.flip >= 0) op = embed(gates::x(), {static_cast<std::size_t>(s.flip)}, 3) * projector;
    out += op * code.matrix() * op.adjoint();
  }
  return {out, DensityMatrix::Unchecked{}};
}

inline DensityMatrix repetition_decode(const DensityMatrix& code) {
  return partial_trace(apply_circuit(code, {Gate::cnot(0, 2), Gate::cnot(0, 1)}), {0});
}

}  // namespace detail

/// Encode into |000>/|111>, send each code qubit through `channel`, correct by
/// majority vote (as an exact recovery channel) and decode.
inline DensityMatrix transmit_encoded(const DensityMatrix& logical, const CodeQubitChannel& channel) {
  if (logical.n_qubits() != 1) throw ArgumentError("logical state must be a single qubit");
  DensityMatrix code = detail::repetition_encode(logical);
  for (std::size_t k = 0; k < 3; ++k) code = channel(code, k);
  return detail::repetition_decode(detail::majority_recover(code));
}

inline DensityMatrix transmit_encoded(const PureState& psi, double q) {
  return transmit_encoded(DensityMatrix(psi), bit_flip_channel(q));
}

/// Pauli weights (I, X, Y, Z) of the logical channel induced by `channel`.
inline std::array<double, 4> induced_channel(const CodeQubitChannel& channel) {
  const PauliTransfer t = pauli_transfer(
      [&channel](const DensityMatrix& in) { return transmit_encoded(in, channel).matrix(); });
  return t.weights;
}

/// One real protocol round per channel use: the code qubit is encoded into the
/// message slots (extra slots start in |0> or |+>), uploaded and downloaded
/// through `carrier`, decoded, and the carrier and extra slots are traced out.
/// Each use starts from the same carrier marginal.
inline CodeQubitChannel protocol_round_channel(const DensityMatrix& carrier, RoundKind kind,
                                               std::size_t cap = kDefaultRegisterCap) {
  if (carrier.n_qubits() < 3) throw ArgumentError("carrier needs at least 3 qubits");
  return [carrier, kind, cap](const DensityMatrix& code, std::size_t qubit) {
    const std::size_t m = carrier.n_qubits();
    const std::size_t n = m - 1;
    const std::size_t code_size = code.n_qubits();
    if (qubit >= code_size) throw ArgumentError("code qubit out of range");

    // Register: carrier (m) | code qubits | n-1 extra slots.
    std::vector<std::string> labels{"A"};
    for (std::size_t j = 1; j <= n; ++j) labels.push_back(RegisterLayout::receiver_label(j));
    const std::size_t message_slot = decoded_slot(kind, n);
    for (std::size_t k = 0; k < code_size; ++k) {
      labels.push_back(k == qubit ? RegisterLayout::slot_label(message_slot + 1)
                                  : "code" + std::to_string(k));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j != message_slot) labels.push_back(RegisterLayout::slot_label(j + 1));
    }
    const RegisterLayout layout(labels);
    detail::check_cap(layout.size(), cap);

    const PureState extra_state =
        kind == RoundKind::ghz_carrier ? PureState::qubit(1.0, 0.0)
                                       : PureState::qubit(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    DensityMatrix joint = tensor(carrier, code, cap);
    for (std::size_t j = 1; j < n; ++j) joint = tensor(joint, DensityMatrix(extra_state), cap);

    Positions slots;
    for (std::size_t j = 1; j <= n; ++j) slots.push_back(layout.position(RegisterLayout::slot_label(j)));
    // The decode cascade is self-inverse and maps the encoding to
    // |message> (x) |fixed extras>, so it also encodes.
    const Circuit codec = decode_circuit(kind, slots);
    joint = apply_circuit(joint, codec);
    joint = upload(joint, kind, layout);
    joint = download(joint, kind, layout);
    joint = apply_circuit(joint, codec);

    Positions keep;
    for (std::size_t k = 0; k < code_size; ++k) keep.push_back(m + k);
    return partial_trace(joint, keep);
  };
}

}  // namespace qcarrier
