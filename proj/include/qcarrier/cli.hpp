#pragma once

// Experiment commands behind the qcarrier command-line tool. Each command
// turns an ExperimentConfig into a Table; tables print as CSV or JSON.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qcarrier/ecc.hpp"
#include "qcarrier/pauliframe.hpp"
#include "qcarrier/protocol.hpp"

namespace qcarrier::cli {

enum class Engine { dense, pauliframe, both };
enum class Format { csv, json };

inline Engine parse_engine(const std::string& s) {
  if (s == "dense") return Engine::dense;
  if (s == "pauliframe") return Engine::pauliframe;
  if (s == "both") return Engine::both;
  throw ArgumentError("unknown engine '" + s + "'");
}

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ArgumentError("unknown format '" + s + "'");
}

/// Inclusive grid start, start+step, ..., up to stop.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.1;

  static Grid parse(const std::string& text) {
    Grid g;
    std::istringstream in(text);
    std::string parts[3];
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(in, parts[i], ':')) throw ArgumentError("grid must be start:stop:step, got '" + text + "'");
    }
    std::string rest;
    if (std::getline(in, rest)) throw ArgumentError("grid must be start:stop:step, got '" + text + "'");
    double* fields[] = {&g.start, &g.stop, &g.step};
    for (int i = 0; i < 3; ++i) {
      std::size_t used = 0;
      try {
        *fields[i] = std::stod(parts[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != parts[i].size()) {
        throw ArgumentError("bad grid number '" + parts[i] + "'");
      }
    }
    g.validate();
    return g;
  }

  void validate() const {
    if (!(step > 0.0)) throw ArgumentError("grid step must be positive");
    if (!(stop >= start)) throw ArgumentError("grid stop must not be below start");
    if ((stop - start) / step > 1e6) throw ArgumentError("grid has too many points");
  }

  std::vector<double> values() const {
    validate();
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) {
      // Snap to 12 significant digits so 0.1*3 prints and compares as 0.3.
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
      out.push_back(std::strtod(buf, nullptr));
    }
    return out;
  }
};

struct ExperimentConfig {
  NoiseKind noise = NoiseKind::none;
  double p = 0.0;
  std::string kicks_file;
  std::size_t rounds = 6;
  std::size_t receivers = 2;
  Engine engine = Engine::dense;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::optional<Grid> grid;
  std::string out;
  Format format = Format::csv;
};

inline NoiseSpec noise_spec(const ExperimentConfig& config, double p) {
  switch (config.noise) {
    case NoiseKind::none:
      return NoiseSpec::none();
    case NoiseKind::dephasing:
      return NoiseSpec::dephasing(p);
    case NoiseKind::depolarizing:
      return NoiseSpec::depolarizing(p);
    case NoiseKind::kicks:
      if (config.kicks_file.empty()) throw ArgumentError("kick noise needs --kicks-file");
      return NoiseSpec::from_kicks(load_kick_file(config.kicks_file));
  }
  throw ArgumentError("unknown noise kind");
}

inline void validate(const ExperimentConfig& config) {
  qcarrier::detail::check_probability(config.p, 1.0, "noise");
  if (config.receivers < 2) throw ArgumentError("need at least two receivers");
  if (config.engine != Engine::dense && config.trials == 0) {
    throw ArgumentError("pauliframe engine needs at least one trial");
  }
  if (config.threads == 0) throw ArgumentError("threads must be at least 1");
  if (config.grid) config.grid->validate();
}

using Cell = std::variant<std::string, std::int64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ArgumentError("row width does not match the header");
    rows.push_back(std::move(row));
  }
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return format_number(std::get<double>(c));
}

// Quotes fields containing commas, quotes or newlines.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
    out << '\n';
  }
}

inline void write_json(std::ostream& out, const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (const auto* s = std::get_if<std::string>(&c)) {
        obj[t.columns[i]] = s->empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(*s);
      } else if (const auto* n = std::get_if<std::int64_t>(&c)) {
        obj[t.columns[i]] = *n;
      } else {
        obj[t.columns[i]] = std::strtod(format_number(std::get<double>(c)).c_str(), nullptr);
      }
    }
    rows.push_back(std::move(obj));
  }
  out << rows.dump(2) << '\n';
}

inline void write_table(std::ostream& out, const Table& t, Format format) {
  if (format == Format::csv) {
    write_csv(out, t);
  } else {
    write_json(out, t);
  }
}

/// Reader for tables written by write_csv (one record per line).
inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          fields.back() += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.emplace_back();
      } else {
        fields.back() += c;
      }
    }
    if (quoted) throw ArgumentError("unterminated quote in CSV line");
    out.push_back(std::move(fields));
  }
  return out;
}

namespace detail {

inline DensityMatrix start_carrier(const NoiseSpec& noise, RoundKind kind, std::size_t receivers) {
  DensityMatrix carrier = noisy_carrier(noise, receivers + 1);
  return kind == RoundKind::parity_carrier ? hadamard_step(carrier) : carrier;
}

// Drops floating-point residue such as -1e-17 from printed channel weights.
inline std::array<double, 4> snapped(std::array<double, 4> w) {
  for (double& v : w) {
    if (std::abs(v) < 1e-13) v = 0.0;
  }
  return w;
}

inline double average_fidelity(const std::array<double, 4>& w) {
  return 1.0 - 2.0 * (w[1] + w[2] + w[3]) / 3.0;
}

constexpr RoundKind kKinds[] = {RoundKind::ghz_carrier, RoundKind::parity_carrier};

struct ChannelRow {
  std::string engine;
  std::array<double, 4> weights{};
  Cell decoded_p_x;
  Cell std_error;
};

inline std::vector<ChannelRow> channel_rows(const ExperimentConfig& config, const NoiseSpec& noise,
                                            RoundKind kind) {
  std::vector<ChannelRow> rows;
  if (config.engine != Engine::pauliframe) {
    const ChannelEstimate est = complete_channel(start_carrier(noise, kind, config.receivers), kind);
    rows.push_back({"dense", snapped(est.weights), snapped(est.decoded)[1], std::string()});
  }
  if (config.engine != Engine::dense) {
    const PauliMixture mixture = as_pauli_mixture(noise.resolved(), config.receivers + 1);
    const FlipRateEstimate mc =
        estimate_flip_rates(mixture, kind, config.trials, config.seed, config.threads);
    rows.push_back({"pauliframe", {1.0 - mc.rate, mc.rate, 0.0, 0.0}, mc.decoded_rate, mc.std_error});
  }
  return rows;
}

}  // namespace detail

/// One row per round: fidelity of the delivered qubit, distance of the
/// round-start carrier to the ideal carrier of that kind, and its drift from
/// the same-kind carrier two rounds earlier.
inline Table cmd_simulate(const ExperimentConfig& config) {
  validate(config);
  ProtocolConfig pc;
  pc.n_receivers = config.receivers;
  pc.rounds = config.rounds;
  pc.noise = noise_spec(config, config.p);
  pc.seed = config.seed;
  const auto records = run_protocol(pc);

  Table t{{"round", "kind", "fidelity", "carrier_distance", "drift"}, {}};
  for (const RoundRecord& r : records) {
    const DensityMatrix ideal(ideal_carrier(r.kind, config.receivers));
    Cell drift = std::string();
    if (r.index >= 2) drift = trace_distance(r.carrier_before, records[r.index - 2].carrier_before);
    t.add({static_cast<std::int64_t>(r.index), to_string(r.kind), r.fidelity_to_sent,
           trace_distance(r.carrier_before, ideal), drift});
  }
  return t;
}

/// Complete-channel weights for both round kinds at the configured p.
inline Table cmd_channel(const ExperimentConfig& config) {
  validate(config);
  const NoiseSpec noise = noise_spec(config, config.p);
  const double p = noise.resolved().p;
  Table t{{"noise", "p", "kind", "engine", "p_I", "p_X", "p_Y", "p_Z", "decoded_p_X", "std_error"},
          {}};
  for (RoundKind kind : detail::kKinds) {
    for (const auto& row : detail::channel_rows(config, noise, kind)) {
      t.add({to_string(config.noise), p, to_string(kind), row.engine, row.weights[0],
             row.weights[1], row.weights[2], row.weights[3], row.decoded_p_x, row.std_error});
    }
  }
  return t;
}

/// Channel weights and average fidelity over a p grid.
inline Table cmd_sweep(const ExperimentConfig& config) {
  validate(config);
  if (config.noise != NoiseKind::dephasing && config.noise != NoiseKind::depolarizing) {
    throw ArgumentError("sweep needs --noise dephasing or depolarizing");
  }
  const Grid grid = config.grid.value_or(Grid{0.0, 0.5, 0.1});
  Table t{{"p", "kind", "engine", "p_I", "p_X", "p_Y", "p_Z", "average_fidelity", "std_error"}, {}};
  for (double p : grid.values()) {
    const NoiseSpec noise = noise_spec(config, p);
    for (RoundKind kind : detail::kKinds) {
      for (const auto& row : detail::channel_rows(config, noise, kind)) {
        t.add({p, to_string(kind), row.engine, row.weights[0], row.weights[1], row.weights[2],
               row.weights[3], detail::average_fidelity(row.weights), row.std_error});
      }
    }
  }
  return t;
}

/// Logical error rate of the three-qubit repetition code over a q grid.
inline Table cmd_ecc(const ExperimentConfig& config) {
  validate(config);
  const Grid grid = config.grid.value_or(Grid{0.0, 0.5, 0.05});
  Table t{{"q", "logical_rate", "suppression_factor"}, {}};
  for (double q : grid.values()) {
    const double pl = logical_error_rate(q);
    Cell factor = std::string();
    if (q > 0.0) factor = pl / q;
    t.add({q, pl, factor});
  }
  return t;
}

/// Operator identities plus the protocol invariants, one row per check.
inline Table cmd_check(const ExperimentConfig& config) {
  validate(config);
  Table t{{"check", "expected", "passed", "residual"}, {}};
  auto add = [&t](const std::string& name, bool expected, bool holds, double residual) {
    t.add({name, std::string(expected ? "holds" : "fails"),
           std::string(holds == expected ? "yes" : "no"), residual});
  };
  for (const IdentityCheck& c : conjugation_identities_check().checks) {
    add(c.name, c.expected, c.holds, c.residual);
  }

  const std::size_t n = config.receivers;
  std::mt19937_64 rng(config.seed);
  for (RoundKind kind : detail::kKinds) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const RoundRecord r = run_round(DensityMatrix(ideal_carrier(kind, n)), random_qubit(rng), kind);
      worst = std::max(worst, std::abs(1.0 - r.fidelity_to_sent));
    }
    add("noiseless " + to_string(kind) + " round is the identity", true, worst <= kIdentityTol, worst);
  }

  for (double p : {0.1, 0.3, 0.5}) {
    for (NoiseKind kind : {NoiseKind::dephasing, NoiseKind::depolarizing}) {
      const NoiseSpec noise =
          kind == NoiseKind::dephasing ? NoiseSpec::dephasing(p) : NoiseSpec::depolarizing(p);
      ProtocolConfig pc;
      pc.n_receivers = n;
      pc.rounds = 8;
      pc.noise = noise;
      pc.seed = config.seed;
      const auto records = run_protocol(pc);
      double drift = 0.0;
      for (std::size_t k = 0; k + 2 < records.size(); ++k) {
        drift = std::max(drift, trace_distance(records[k].carrier_before, records[k + 2].carrier_before));
      }
      add("carrier period two " + to_string(kind) + " p=" + format_number(p), true,
          drift <= kStructuralTol, drift);

      const double mix = qcarrier::detail::max_abs(as_pauli_mixture(noise, n + 1).applied_to(ghz_state(n + 1)) -
                                         noisy_carrier(noise, n + 1).matrix());
      add("Pauli mixture rebuilds " + to_string(kind) + " carrier p=" + format_number(p), true,
          mix <= kIdentityTol, mix);
    }
  }

  for (double q : {0.05, 0.1, 0.2}) {
    const auto w = induced_channel(bit_flip_channel(q));
    const double r = std::abs(w[1] - logical_error_rate(q));
    add("repetition code logical rate q=" + format_number(q), true, r <= kStructuralTol, r);
  }
  return t;
}

/// Whether every row of a check table passed.
inline bool all_checks_passed(const Table& t) {
  for (const auto& row : t.rows) {
    if (std::get<std::string>(row[2]) != "yes") return false;
  }
  return true;
}

}  // namespace qcarrier::cli
