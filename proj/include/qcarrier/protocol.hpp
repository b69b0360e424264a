#pragma once

// The round state machine on the dense engine: encode, upload, download,
// joint Hadamard step, collaborative decoding, multi-round runs and
// complete-channel extraction.

#include <array>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcarrier/channel.hpp"
#include "qcarrier/densekernel.hpp"
#include "qcarrier/noise.hpp"
#include "qcarrier/round.hpp"
#include "qcarrier/states.hpp"

namespace qcarrier {

inline void check_layout_size(const DensityMatrix& joint, const RegisterLayout& layout) {
  if (joint.n_qubits() != layout.size()) {
    throw ArgumentError("state has " + std::to_string(joint.n_qubits()) +
                        " qubits but layout has " + std::to_string(layout.size()));
  }
}

/// Sender's CNOTs.
inline DensityMatrix upload(const DensityMatrix& joint, RoundKind kind,
                            const RegisterLayout& layout) {
  check_layout_size(joint, layout);
  return apply_circuit(joint, upload_circuit(kind, resolve_roles(layout)));
}

/// Receivers' CNOTs.
inline DensityMatrix download(const DensityMatrix& joint, RoundKind /*kind*/,
                              const RegisterLayout& layout) {
  check_layout_size(joint, layout);
  return apply_circuit(joint, download_circuit(resolve_roles(layout)));
}

/// H on every carrier qubit. Maps the GHZ carrier to the parity carrier and back.
inline DensityMatrix hadamard_step(const DensityMatrix& carrier) {
  Circuit c;
  for (std::size_t q = 0; q < carrier.n_qubits(); ++q) c.push_back(Gate::h(q));
  return apply_circuit(carrier, c);
}

/// The noiseless carrier a round of this kind starts from, on n_receivers + 1 qubits.
inline PureState ideal_carrier(RoundKind kind, std::size_t n_receivers) {
  return kind == RoundKind::ghz_carrier ? ghz_state(n_receivers + 1)
                                        : parity_state(n_receivers + 1, kEven);
}

/// Columns |enc(0)>, |enc(1)> of the message encoding for n slots.
inline Matrix encoding_isometry(RoundKind kind, std::size_t n_slots) {
  const PureState e0 = PureState::qubit(1.0, 0.0);
  const PureState e1 = PureState::qubit(0.0, 1.0);
  const auto dim = Eigen::Index{1} << n_slots;
  Matrix v(dim, 2);
  if (kind == RoundKind::ghz_carrier) {
    v.col(0) = encode_product(e0, n_slots).amplitudes();
    v.col(1) = encode_product(e1, n_slots).amplitudes();
  } else {
    v.col(0) = encode_parity(e0, n_slots).amplitudes();
    v.col(1) = encode_parity(e1, n_slots).amplitudes();
  }
  return v;
}

inline DensityMatrix encode(const DensityMatrix& message, RoundKind kind, std::size_t n_slots) {
  if (message.n_qubits() != 1) throw ArgumentError("message must be a single qubit");
  const Matrix v = encoding_isometry(kind, n_slots);
  return {v * message.matrix() * v.adjoint(), DensityMatrix::Unchecked{}};
}

/// Receivers jointly decode an n-slot register back to one qubit.
inline DensityMatrix collaborate_decode(const DensityMatrix& message, RoundKind kind) {
  const std::size_t n = message.n_qubits();
  if (n < 2) throw ArgumentError("message register needs at least two slots");
  Positions slots(n);
  for (std::size_t j = 0; j < n; ++j) slots[j] = j;
  const DensityMatrix folded = apply_circuit(message, decode_circuit(kind, slots));
  return partial_trace(folded, {decoded_slot(kind, n)});
}

struct RoundRecord {
  std::size_t index = 0;
  RoundKind kind = RoundKind::ghz_carrier;
  DensityMatrix delivered = DensityMatrix::maximally_mixed(1);
  // Message register as received, before collaborative decoding.
  DensityMatrix received = DensityMatrix::maximally_mixed(1);
  double fidelity_to_sent = 0.0;
  DensityMatrix carrier_before = DensityMatrix::maximally_mixed(1);
  DensityMatrix carrier_after = DensityMatrix::maximally_mixed(1);
};

namespace detail {

// Carrier and message after upload and download, laid out as A, R_1..R_n, 1..n.
inline DensityMatrix run_round_joint(const DensityMatrix& carrier, const DensityMatrix& message,
                                     RoundKind kind, std::size_t cap) {
  if (carrier.n_qubits() < 3) throw ArgumentError("carrier needs at least 3 qubits");
  const std::size_t n = carrier.n_qubits() - 1;
  check_cap(2 * n + 1, cap);
  const RegisterLayout layout = RegisterLayout::protocol(n);
  DensityMatrix joint = tensor(carrier, encode(message, kind, n), cap);
  joint = upload(joint, kind, layout);
  return download(joint, kind, layout);
}

inline Positions range_positions(std::size_t begin, std::size_t end) {
  Positions out;
  for (std::size_t q = begin; q < end; ++q) out.push_back(q);
  return out;
}

}  // namespace detail

/// One full round. carrier_after is the carrier marginal after download,
/// before the Hadamard step.
inline RoundRecord run_round(const DensityMatrix& carrier, const PureState& message,
                             RoundKind kind, std::size_t index = 0,
                             std::size_t cap = kDefaultRegisterCap) {
  if (message.n_qubits() != 1) throw ArgumentError("message must be a single qubit");
  const std::size_t n = carrier.n_qubits() - 1;
  const DensityMatrix joint = detail::run_round_joint(carrier, DensityMatrix(message), kind, cap);
  RoundRecord r;
  r.index = index;
  r.kind = kind;
  r.carrier_before = carrier;
  r.carrier_after = partial_trace(joint, detail::range_positions(0, n + 1));
  r.received = partial_trace(joint, detail::range_positions(n + 1, 2 * n + 1));
  r.delivered = collaborate_decode(r.received, kind);
  r.fidelity_to_sent = fidelity_pure(r.delivered, message);
  return r;
}

/// Haar-random single-qubit state.
template <typename Rng>
PureState random_qubit(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(2);
  v << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
  v /= v.norm();
  return PureState(std::move(v));
}

struct ProtocolConfig {
  std::size_t n_receivers = 2;
  std::size_t rounds = 4;
  NoiseSpec noise;
  // Empty: draw Haar-random messages from `seed`.
  std::vector<PureState> messages;
  std::uint64_t seed = 1;
  // Send a fixed |0> in ghz-carrier rounds.
  bool redundant_ghz_rounds = false;
  std::size_t register_cap = kDefaultRegisterCap;
};

/// Rounds 0..R-1 alternating from the GHZ carrier, with the Hadamard step
/// between rounds.
inline std::vector<RoundRecord> run_protocol(const ProtocolConfig& config) {
  if (config.n_receivers < 2) throw ArgumentError("need at least two receivers");
  detail::check_cap(2 * config.n_receivers + 1, config.register_cap);
  if (!config.messages.empty() && config.messages.size() != config.rounds) {
    throw ArgumentError("got " + std::to_string(config.messages.size()) + " messages for " +
                        std::to_string(config.rounds) + " rounds");
  }
  std::vector<PureState> messages = config.messages;
  if (messages.empty()) {
    std::mt19937_64 rng(config.seed);
    for (std::size_t k = 0; k < config.rounds; ++k) messages.push_back(random_qubit(rng));
  }

  DensityMatrix carrier = noisy_carrier(config.noise, config.n_receivers + 1);
  std::vector<RoundRecord> records;
  records.reserve(config.rounds);
  for (std::size_t k = 0; k < config.rounds; ++k) {
    const RoundKind kind = kind_for_round(k);
    const PureState& message = (config.redundant_ghz_rounds && kind == RoundKind::ghz_carrier)
                                   ? PureState::qubit(1.0, 0.0)
                                   : messages[k];
    records.push_back(run_round(carrier, message, kind, k, config.register_cap));
    carrier = hadamard_step(records.back().carrier_after);
  }
  return records;
}

/// Effective channel of a round on a given carrier.
struct ChannelEstimate {
  // Complete channel (I, X, Y, Z). Parity rounds: the decoded qubit's channel.
  // Ghz rounds: bit-flip channel whose flip weight is the probability that the
  // received register differs from the sent |q...q>.
  std::array<double, 4> weights{};
  // Pauli weights of the collaboratively decoded qubit (both kinds).
  std::array<double, 4> decoded{};
  // Ghz rounds only: weight of each X pattern on the slots, indexed by the
  // flipped bit string (slot 1 is the most significant bit).
  std::vector<double> register_patterns;
  // Ghz rounds only: marginal flip probability of each slot.
  std::vector<double> slot_flip;
  // Probability that the message arrives flipped (weights[1]).
  double error_rate = 0.0;
  // True when the map is Pauli-diagonal within tolerance.
  bool pauli = true;

  double p_i() const { return weights[0]; }
  double p_x() const { return weights[1]; }
  double p_y() const { return weights[2]; }
  double p_z() const { return weights[3]; }
};

namespace detail {

inline void check_probability_vector(const std::array<double, 4>& w, const char* what) {
  double total = 0.0;
  for (double v : w) {
    if (v < -kProbabilityTol) {
      throw ConsistencyError(std::string(what) + ": negative Pauli weight " + std::to_string(v));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    throw ConsistencyError(std::string(what) + ": Pauli weights sum to " + std::to_string(total));
  }
}

}  // namespace detail

/// Tomography of the round map on `carrier` (GHZ form for ghz rounds, parity
/// form for parity rounds).
inline ChannelEstimate complete_channel(const DensityMatrix& carrier, RoundKind kind,
                                        std::size_t cap = kDefaultRegisterCap) {
  if (carrier.n_qubits() < 3) throw ArgumentError("carrier needs at least 3 qubits");
  const std::size_t n = carrier.n_qubits() - 1;
  const Positions slots = detail::range_positions(n + 1, 2 * n + 1);

  const QubitMap received = [&](const DensityMatrix& in) {
    return partial_trace(detail::run_round_joint(carrier, in, kind, cap), slots).matrix();
  };
  const auto register_images = operator_basis_images(received);

  std::array<Matrix, 4> decoded_images;
  for (std::size_t k = 0; k < 4; ++k) {
    // Decoding is linear, so it can act on the non-state operator images directly.
    Positions local = detail::range_positions(0, n);
    Matrix folded = register_images[k];
    for (const Gate& g : decode_circuit(kind, local)) {
      folded = detail::conjugate(folded, gate_matrix(g), gate_targets(g), n);
    }
    // Partial trace keeping the decoded slot.
    const std::size_t keep_mask = detail::bit_mask(decoded_slot(kind, n), n);
    Matrix reduced = Matrix::Zero(2, 2);
    for (Eigen::Index r = 0; r < folded.rows(); ++r) {
      for (Eigen::Index c = 0; c < folded.cols(); ++c) {
        const auto ur = static_cast<std::size_t>(r);
        const auto uc = static_cast<std::size_t>(c);
        if ((ur & ~keep_mask) != (uc & ~keep_mask)) continue;
        reduced((ur & keep_mask) ? 1 : 0, (uc & keep_mask) ? 1 : 0) += folded(r, c);
      }
    }
    decoded_images[k] = reduced;
  }

  const PauliTransfer transfer = pauli_transfer(decoded_images);
  if (transfer.trace_defect > kProbabilityTol) {
    throw ConsistencyError("round map is not trace preserving (defect " +
                           std::to_string(transfer.trace_defect) + ")");
  }
  ChannelEstimate est;
  est.decoded = transfer.weights;
  est.pauli = transfer.off_diagonal <= kProbabilityTol;
  detail::check_probability_vector(est.decoded, "decoded channel");

  if (kind == RoundKind::parity_carrier) {
    est.weights = est.decoded;
  } else {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t all_ones = dim - 1;
    est.register_patterns.assign(dim, 0.0);
    for (std::size_t w = 0; w < dim; ++w) {
      const auto a = static_cast<Eigen::Index>(w);
      const auto b = static_cast<Eigen::Index>(w ^ all_ones);
      est.register_patterns[w] = 0.5 * (register_images[0](a, a).real() +
                                        register_images[3](b, b).real());
    }
    // Rebuild the register map from the patterns; any mismatch means the
    // received register is not an X-pattern mixture of the sent codeword.
    const Matrix v = encoding_isometry(kind, n);
    const std::array<Matrix, 4> basis{
        Matrix{{1, 0}, {0, 0}}, Matrix{{0, 1}, {0, 0}}, Matrix{{0, 0}, {1, 0}},
        Matrix{{0, 0}, {0, 1}}};
    double residual = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const Matrix sent = v * basis[k] * v.adjoint();
      Matrix rebuilt = Matrix::Zero(sent.rows(), sent.cols());
      for (std::size_t w = 0; w < dim; ++w) {
        if (est.register_patterns[w] == 0.0) continue;
        for (Eigen::Index r = 0; r < sent.rows(); ++r) {
          for (Eigen::Index c = 0; c < sent.cols(); ++c) {
            rebuilt(static_cast<Eigen::Index>(static_cast<std::size_t>(r) ^ w),
                    static_cast<Eigen::Index>(static_cast<std::size_t>(c) ^ w)) +=
                est.register_patterns[w] * sent(r, c);
          }
        }
      }
      residual = std::max(residual, detail::max_abs(rebuilt - register_images[k]));
    }
    est.pauli = est.pauli && residual <= kProbabilityTol;

    est.slot_flip.assign(n, 0.0);
    for (std::size_t w = 0; w < dim; ++w) {
      for (std::size_t j = 0; j < n; ++j) {
        if (w & detail::bit_mask(j, n)) est.slot_flip[j] += est.register_patterns[w];
      }
    }
    const double flip = 1.0 - est.register_patterns[0];
    est.weights = {1.0 - flip, flip, 0.0, 0.0};
  }
  detail::check_probability_vector(est.weights, "complete channel");
  est.error_rate = est.weights[1];
  return est;
}

struct IdentityCheck {
  std::string name;
  bool expected = true;  // whether the identity is supposed to hold
  bool holds = false;
  double residual = 0.0;

  bool passed() const { return holds == expected; }
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed()) return false;
    }
    return true;
  }
};

/// Verifies the commutation relations of the two round operators with carrier
/// Paulis as 32x32 matrix identities on A, B, C, 1, 2.
inline IdentityReport conjugation_identities_check() {
  constexpr std::size_t n = 5;
  constexpr std::size_t kA = 0, kB = 1, kC = 2, k1 = 3, k2 = 4;
  auto cx = [](std::size_t c, std::size_t t) { return embed(gates::cnot(), {c, t}, n); };
  auto xs = [](std::initializer_list<std::size_t> qs) {
    Matrix m = gates::identity(n);
    for (std::size_t q : qs) m = embed(gates::x(), {q}, n) * m;
    return m;
  };
  auto zs = [](std::size_t q) { return embed(gates::z(), {q}, n); };

  const Matrix omega_even = cx(kC, k2) * cx(kB, k1) * cx(kA, k2) * cx(kA, k1);
  const Matrix omega_odd = cx(kC, k2) * cx(kB, k1) * cx(kA, k1);

  IdentityReport report;
  auto check = [&report](std::string name, const Matrix& lhs, const Matrix& rhs, bool expected) {
    const double residual = detail::max_abs(lhs - rhs);
    report.checks.push_back({std::move(name), expected, residual <= kIdentityTol, residual});
  };

  check("Omega_even X_A = X_A X_1 X_2 Omega_even", omega_even * xs({kA}),
        xs({kA, k1, k2}) * omega_even, true);
  check("Omega_even X_B = X_B X_1 Omega_even", omega_even * xs({kB}), xs({kB, k1}) * omega_even,
        true);
  check("Omega_even X_C = X_C X_2 Omega_even", omega_even * xs({kC}), xs({kC, k2}) * omega_even,
        true);
  for (auto [q, label] : {std::pair{kA, "A"}, std::pair{kB, "B"}, std::pair{kC, "C"}}) {
    check(std::string("Omega_odd Z_") + label + " = Z_" + label + " Omega_odd",
          omega_odd * zs(q), zs(q) * omega_odd, true);
    check(std::string("Omega_even Z_") + label + " = Z_" + label + " Omega_even",
          omega_even * zs(q), zs(q) * omega_even, true);
  }
  check("Omega_odd X_A X_B X_C = X_2 X_A X_B X_C Omega_odd", omega_odd * xs({kA, kB, kC}),
        xs({k2, kA, kB, kC}) * omega_odd, true);
  check("Omega_odd X_A = X_A X_1 Omega_odd", omega_odd * xs({kA}), xs({kA, k1}) * omega_odd, true);
  check("Omega_odd X_A = X_A Omega_odd", omega_odd * xs({kA}), xs({kA}) * omega_odd, false);

  // Omega_even |G_i>|qq> = |G_i> X^(i)|qq>, X^(0)=I, X^(A)=X_1X_2, X^(B)=X_1, X^(C)=X_2,
  // for both signs of G_i.
  const std::array<Positions, 4> flips{Positions{}, Positions{k1, k2}, Positions{k1},
                                       Positions{k2}};
  for (const GhzLabel& label : kGhzOctet) {
    double residual = 0.0;
    for (const char* q : {"00", "11"}) {
      const Vector in = tensor(ghz_basis_state(label), PureState::basis(q)).amplitudes();
      Vector expected = in;
      for (std::size_t pos : flips[static_cast<int>(label.site)]) {
        expected = embed(gates::x(), {pos}, n) * expected;
      }
      residual = std::max(residual, (omega_even * in - expected).cwiseAbs().maxCoeff());
    }
    report.checks.push_back({"Omega_even |" + label.name() + ">|qq> = |" + label.name() +
                                 "> X^(i)|qq>",
                             true, residual <= kIdentityTol, residual});
  }
  return report;
}

}  // namespace qcarrier
