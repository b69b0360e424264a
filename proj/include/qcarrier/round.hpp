#pragma once

// Gate-level description of one protocol round, shared by the dense engine
// and the Pauli-frame engine.
//
// Ghz-carrier rounds: the sender A applies C_{A,j} to every message slot j.
// Parity-carrier rounds: A applies C_{A,1} only. In both, receiver R_j then
// applies C_{R_j,j}. For two receivers these are
//   Omega_even = C_{C,2} C_{B,1} C_{A,2} C_{A,1},  Omega_odd = C_{C,2} C_{B,1} C_{A,1}.

#include <cstddef>
#include <string>
#include <vector>

#include "qcarrier/densekernel.hpp"

namespace qcarrier {

enum class RoundKind { ghz_carrier, parity_carrier };

/// Round 0 uses the GHZ carrier; kinds alternate afterwards.
constexpr RoundKind kind_for_round(std::size_t index) {
  return index % 2 == 0 ? RoundKind::ghz_carrier : RoundKind::parity_carrier;
}

constexpr RoundKind toggled(RoundKind kind) {
  return kind == RoundKind::ghz_carrier ? RoundKind::parity_carrier : RoundKind::ghz_carrier;
}

inline std::string to_string(RoundKind kind) {
  return kind == RoundKind::ghz_carrier ? "ghz" : "parity";
}

inline RoundKind parse_round_kind(const std::string& s) {
  if (s == "ghz") return RoundKind::ghz_carrier;
  if (s == "parity") return RoundKind::parity_carrier;
  throw ArgumentError("unknown round kind '" + s + "'");
}

enum class GateKind { cnot, h, x, z };

struct Gate {
  GateKind kind = GateKind::h;
  std::size_t a = 0;  // control for CNOT, else the qubit
  std::size_t b = 0;  // CNOT target

  static Gate cnot(std::size_t control, std::size_t target) {
    return {GateKind::cnot, control, target};
  }
  static Gate h(std::size_t q) { return {GateKind::h, q, 0}; }
  static Gate x(std::size_t q) { return {GateKind::x, q, 0}; }
  static Gate z(std::size_t q) { return {GateKind::z, q, 0}; }
};

/// Gates in application order (first element acts first).
using Circuit = std::vector<Gate>;

/// Positions of the sender, receivers and message slots in a register.
struct RoundRoles {
  std::size_t sender = 0;
  Positions receivers;
  Positions slots;

  Positions carrier() const {
    Positions out{sender};
    out.insert(out.end(), receivers.begin(), receivers.end());
    return out;
  }
};

/// Requires label A, slots "1".."n" (n >= 2) and one receiver per slot.
inline RoundRoles resolve_roles(const RegisterLayout& layout) {
  if (!layout.contains("A")) throw ArgumentError("layout is missing the sender role A");
  RoundRoles roles;
  roles.sender = layout.position("A");
  for (std::size_t j = 1; layout.contains(RegisterLayout::slot_label(j)); ++j) {
    roles.slots.push_back(layout.position(RegisterLayout::slot_label(j)));
    const auto receiver = RegisterLayout::receiver_label(j);
    if (!layout.contains(receiver)) {
      throw ArgumentError("layout is missing receiver " + receiver + " for slot " +
                          std::to_string(j));
    }
    roles.receivers.push_back(layout.position(receiver));
  }
  if (roles.slots.size() < 2) throw ArgumentError("layout needs at least message slots 1 and 2");
  return roles;
}

inline Circuit upload_circuit(RoundKind kind, const RoundRoles& roles) {
  Circuit c;
  if (kind == RoundKind::ghz_carrier) {
    for (std::size_t slot : roles.slots) c.push_back(Gate::cnot(roles.sender, slot));
  } else {
    c.push_back(Gate::cnot(roles.sender, roles.slots.front()));
  }
  return c;
}

inline Circuit download_circuit(const RoundRoles& roles) {
  Circuit c;
  for (std::size_t j = 0; j < roles.slots.size(); ++j) {
    c.push_back(Gate::cnot(roles.receivers[j], roles.slots[j]));
  }
  return c;
}

/// Upload followed by download.
inline Circuit round_circuit(RoundKind kind, const RoundRoles& roles) {
  Circuit c = upload_circuit(kind, roles);
  const Circuit d = download_circuit(roles);
  c.insert(c.end(), d.begin(), d.end());
  return c;
}

/// Index (within the slots) of the qubit holding the decoded message.
inline std::size_t decoded_slot(RoundKind kind, std::size_t n_slots) {
  return kind == RoundKind::ghz_carrier ? 0 : n_slots - 1;
}

/// Collaborative decoding on `slots`: ghz rounds undo the repetition with
/// C_{1,j}; parity rounds fold the parity into the last slot with C_{j,n}.
inline Circuit decode_circuit(RoundKind kind, const Positions& slots) {
  Circuit c;
  const std::size_t n = slots.size();
  if (kind == RoundKind::ghz_carrier) {
    for (std::size_t j = 1; j < n; ++j) c.push_back(Gate::cnot(slots[0], slots[j]));
  } else {
    for (std::size_t j = 0; j + 1 < n; ++j) c.push_back(Gate::cnot(slots[j], slots[n - 1]));
  }
  return c;
}

inline Matrix gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::cnot:
      return gates::cnot();
    case GateKind::h:
      return gates::h();
    case GateKind::x:
      return gates::x();
    case GateKind::z:
      return gates::z();
  }
  throw ArgumentError("unsupported gate kind");
}

inline Positions gate_targets(const Gate& g) {
  if (g.kind == GateKind::cnot) return {g.a, g.b};
  return {g.a};
}

/// Dense unitary of a circuit on n qubits.
inline Matrix circuit_unitary(const Circuit& circuit, std::size_t n) {
  Matrix u = gates::identity(n);
  for (const Gate& g : circuit) {
    const Positions targets = gate_targets(g);
    detail::check_targets(targets, n, gate_matrix(g).rows());
    detail::apply_left(u, gate_matrix(g), targets, n);
  }
  return u;
}

inline DensityMatrix apply_circuit(const DensityMatrix& rho, const Circuit& circuit) {
  DensityMatrix out = rho;
  for (const Gate& g : circuit) out = apply_unitary(out, gate_matrix(g), gate_targets(g));
  return out;
}

}  // namespace qcarrier
