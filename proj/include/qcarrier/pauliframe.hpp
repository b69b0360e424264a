#pragma once

// Pauli-frame Monte Carlo: sample a carrier error word from a Pauli mixture,
// push it through the round's CNOT circuit symbolically, and read off whether
// the message register arrives flipped.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "qcarrier/noise.hpp"
#include "qcarrier/pauli_word.hpp"
#include "qcarrier/round.hpp"

namespace qcarrier {

/// Returns w' with U w = w' U, i.e. w' = U w U^dagger, for the circuit U.
inline PauliWord conjugate_through(PauliWord word, const Circuit& circuit) {
  const std::size_t n = word.n_qubits();
  for (const Gate& g : circuit) {
    const bool two_qubit = g.kind == GateKind::cnot;
    if (g.a >= n || (two_qubit && (g.b >= n || g.b == g.a))) {
      throw ArgumentError("gate qubit out of range for Pauli word");
    }
    switch (g.kind) {
      case GateKind::cnot:
        word.conjugate_cnot(g.a, g.b);
        break;
      case GateKind::h:
        word.conjugate_h(g.a);
        break;
      case GateKind::x:
        word.conjugate_x(g.a);
        break;
      case GateKind::z:
        word.conjugate_z(g.a);
        break;
      default:
        throw ArgumentError("unsupported gate kind in Pauli-frame circuit");
    }
  }
  return word;
}

/// Places `word` on `positions` of an n_total-qubit register.
inline PauliWord embed_word(const PauliWord& word, const Positions& positions,
                            std::size_t n_total) {
  if (positions.size() != word.n_qubits()) throw ArgumentError("embedding size mismatch");
  std::string s(n_total, 'I');
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (positions[j] >= n_total) throw ArgumentError("embedding position out of range");
    s[positions[j]] = word.at(j);
  }
  static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
  return PauliWord::parse(kPrefix[word.sigma_phase()] + s);
}

/// Whether a Pauli on the message slots leaves every encoded message intact.
/// Parity encoding: stabilized by even-weight X patterns. Product encoding:
/// stabilized by even-weight Z patterns.
inline bool acts_trivially(const PauliWord& message_word, RoundKind kind) {
  const auto x_count = std::popcount(message_word.x_mask());
  const auto z_count = std::popcount(message_word.z_mask());
  if (kind == RoundKind::parity_carrier) return z_count == 0 && x_count % 2 == 0;
  return x_count == 0 && z_count % 2 == 0;
}

struct TrialOutcome {
  RoundKind kind = RoundKind::ghz_carrier;
  // Sampled carrier error, in the frame of this round's carrier.
  PauliWord carrier_word;
  // Carrier part after the round.
  PauliWord carrier_residual;
  // Error left on the message slots after download.
  PauliWord message_word;
  // The received register differs from the sent encoding.
  bool flipped = false;
  // The collaboratively decoded qubit carries an X error.
  bool decoded_flipped = false;
};

/// SplitMix64 finalizer; per-trial streams are mix(master ^ mix(trial)).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return mix64(master ^ mix64(trial));
}

/// Runs one trial. The mixture is over GHZ-carrier words on n+1 qubits; for
/// parity rounds the sampled word is first moved through the Hadamard step.
inline TrialOutcome sample_trial(const PauliMixture& noise, RoundKind kind, std::uint64_t seed) {
  const std::size_t m = noise.n_qubits();
  if (m < 3) throw ArgumentError("carrier mixture needs at least 3 qubits");
  const std::size_t n = m - 1;

  const double u = static_cast<double>(mix64(seed) >> 11U) * 0x1.0p-53;
  const auto& terms = noise.terms();
  std::size_t chosen = terms.size() - 1;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    cumulative += terms[i].probability;
    if (u < cumulative) {
      chosen = i;
      break;
    }
  }
  // Trailing zero-probability terms are never chosen by the fallback.
  while (chosen > 0 && terms[chosen].probability == 0.0) --chosen;

  PauliWord carrier_word = terms[chosen].word;
  if (kind == RoundKind::parity_carrier) {
    for (std::size_t q = 0; q < m; ++q) carrier_word.conjugate_h(q);
  }

  RoundRoles roles;
  roles.sender = 0;
  for (std::size_t j = 1; j <= n; ++j) roles.receivers.push_back(j);
  for (std::size_t j = 0; j < n; ++j) roles.slots.push_back(n + 1 + j);

  const PauliWord full = embed_word(carrier_word, roles.carrier(), 2 * n + 1);
  const PauliWord after = conjugate_through(full, round_circuit(kind, roles));

  TrialOutcome out;
  out.kind = kind;
  out.carrier_word = carrier_word;
  out.carrier_residual = after.restricted(roles.carrier());
  out.message_word = after.restricted(roles.slots);
  out.flipped = !acts_trivially(out.message_word, kind);

  Positions local(n);
  for (std::size_t j = 0; j < n; ++j) local[j] = j;
  const PauliWord decoded = conjugate_through(out.message_word, decode_circuit(kind, local));
  out.decoded_flipped = (decoded.x_mask() >> decoded_slot(kind, n)) & 1U;
  return out;
}

struct FlipRateEstimate {
  std::size_t trials = 0;
  std::size_t flips = 0;
  double rate = 0.0;
  double std_error = 0.0;
  double decoded_rate = 0.0;
  double decoded_std_error = 0.0;
  // Per-slot X error frequency.
  std::vector<double> slot_rates;
};

/// Monte Carlo flip-rate estimate; the result depends only on (seed, trials),
/// not on the thread count.
inline FlipRateEstimate estimate_flip_rates(const PauliMixture& noise, RoundKind kind,
                                            std::size_t trials, std::uint64_t seed,
                                            std::size_t threads = 1) {
  if (trials == 0) throw ArgumentError("need at least one trial");
  const std::size_t n = noise.n_qubits() - 1;
  threads = std::max<std::size_t>(1, std::min(threads, trials));

  struct Counts {
    std::size_t flips = 0;
    std::size_t decoded = 0;
    std::vector<std::size_t> slots;
  };
  std::vector<Counts> partial(threads, Counts{0, 0, std::vector<std::size_t>(n, 0)});
  auto work = [&](std::size_t t) {
    Counts& c = partial[t];
    const std::size_t begin = trials * t / threads;
    const std::size_t end = trials * (t + 1) / threads;
    for (std::size_t i = begin; i < end; ++i) {
      const TrialOutcome o = sample_trial(noise, kind, trial_seed(seed, i));
      c.flips += o.flipped;
      c.decoded += o.decoded_flipped;
      for (std::size_t j = 0; j < n; ++j) c.slots[j] += (o.message_word.x_mask() >> j) & 1U;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  Counts total{0, 0, std::vector<std::size_t>(n, 0)};
  for (const Counts& c : partial) {
    total.flips += c.flips;
    total.decoded += c.decoded;
    for (std::size_t j = 0; j < n; ++j) total.slots[j] += c.slots[j];
  }
  const auto count = static_cast<double>(trials);
  auto se = [count](double r) { return std::sqrt(r * (1.0 - r) / count); };
  FlipRateEstimate est;
  est.trials = trials;
  est.flips = total.flips;
  est.rate = static_cast<double>(total.flips) / count;
  est.std_error = se(est.rate);
  est.decoded_rate = static_cast<double>(total.decoded) / count;
  est.decoded_std_error = se(est.decoded_rate);
  for (std::size_t j = 0; j < n; ++j) {
    est.slot_rates.push_back(static_cast<double>(total.slots[j]) / count);
  }
  return est;
}

}  // namespace qcarrier
