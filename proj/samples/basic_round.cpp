// Sends a few qubits over a de-phased carrier and prints what arrives.

#include <cstdio>

#include "qcarrier/protocol.hpp"

int main() {
  using namespace qcarrier;

  ProtocolConfig config;
  config.rounds = 6;
  config.noise = NoiseSpec::dephasing(0.2);
  config.messages.assign(config.rounds, PureState::qubit(0.6, 0.8));

  for (const RoundRecord& r : run_protocol(config)) {
    std::printf("round %zu  %-6s  fidelity %.6f\n", r.index, to_string(r.kind).c_str(),
                r.fidelity_to_sent);
  }

  // Ghz rounds are immune to de-phasing; parity rounds see a bit flip with probability p.
  const DensityMatrix carrier = noisy_carrier(config.noise);
  for (RoundKind kind : {RoundKind::ghz_carrier, RoundKind::parity_carrier}) {
    const DensityMatrix start = kind == RoundKind::ghz_carrier ? carrier : hadamard_step(carrier);
    const ChannelEstimate est = complete_channel(start, kind);
    std::printf("%-6s channel: p_I %.4f  p_X %.4f\n", to_string(kind).c_str(), est.p_i(), est.p_x());
  }
}
