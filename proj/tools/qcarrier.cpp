// qcarrier: run protocol experiments and print tables.
//
//   qcarrier simulate --noise dephasing --p 0.2 --rounds 6
//   qcarrier sweep --noise depolarizing --grid 0:0.5:0.1 --engine both --format json
//   qcarrier check
//
// Exit status: 0 ok, 2 bad configuration, 3 failed consistency check.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qcarrier/cli.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kConsistencyError = 3;

struct RawOptions {
  std::string noise = "none";
  double p = 0.0;
  std::size_t rounds = 6;
  std::size_t receivers = 2;
  std::string engine = "dense";
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string grid;
  std::string out;
  std::string format = "csv";
  std::string kicks_file;
};

void add_options(CLI::App* sub, RawOptions& o) {
  sub->add_option("--noise", o.noise, "Carrier noise")
      ->check(CLI::IsMember({"none", "dephasing", "depolarizing", "kicks"}));
  sub->add_option("--p", o.p, "Noise strength in [0, 1]");
  sub->add_option("--rounds", o.rounds, "Number of protocol rounds");
  sub->add_option("--receivers", o.receivers, "Number of receivers (>= 2)");
  sub->add_option("--engine", o.engine, "Channel engine")
      ->check(CLI::IsMember({"dense", "pauliframe", "both"}));
  sub->add_option("--trials", o.trials, "Monte Carlo trials per cell");
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--threads", o.threads, "Monte Carlo worker threads");
  sub->add_option("--grid", o.grid, "Parameter grid start:stop:step");
  sub->add_option("--out", o.out, "Output file (default stdout)");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--kicks-file", o.kicks_file, "Phase-kick table for --noise kicks");
}

qcarrier::cli::ExperimentConfig to_config(const RawOptions& o) {
  namespace qc = qcarrier::cli;
  qc::ExperimentConfig c;
  c.noise = qcarrier::parse_noise_kind(o.noise);
  c.p = o.p;
  c.rounds = o.rounds;
  c.receivers = o.receivers;
  c.engine = qc::parse_engine(o.engine);
  c.trials = o.trials;
  c.seed = o.seed;
  c.threads = o.threads;
  if (!o.grid.empty()) c.grid = qc::Grid::parse(o.grid);
  c.out = o.out;
  c.format = qc::parse_format(o.format);
  c.kicks_file = o.kicks_file;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  namespace qc = qcarrier::cli;
  CLI::App app{"Reusable GHZ-carrier protocol simulator"};
  app.set_config("--config", "", "INI file with one section per subcommand");
  app.require_subcommand(1);
  app.fallthrough();

  using Command = std::function<qc::Table(const qc::ExperimentConfig&)>;
  const std::map<std::string, std::pair<std::string, Command>> commands{
      {"simulate", {"Run rounds and report fidelity and carrier drift", qc::cmd_simulate}},
      {"channel", {"Complete-channel weights for both round kinds", qc::cmd_channel}},
      {"sweep", {"Channel weights over a grid of p", qc::cmd_sweep}},
      {"ecc", {"Repetition-code logical error rate over a grid of q", qc::cmd_ecc}},
      {"check", {"Operator identities and protocol invariants", qc::cmd_check}},
  };
  RawOptions options;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    subs[name] = app.add_subcommand(name, entry.first);
    add_options(subs[name], options);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  std::string chosen;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) chosen = name;
  }

  qc::Table table;
  try {
    const qc::ExperimentConfig config = to_config(options);
    table = commands.at(chosen).second(config);
    if (config.out.empty()) {
      qc::write_table(std::cout, table, config.format);
    } else {
      std::ofstream out(config.out, std::ios::binary);
      if (!out) throw qcarrier::ArgumentError("cannot write '" + config.out + "'");
      qc::write_table(out, table, config.format);
    }
  } catch (const qcarrier::ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return kConsistencyError;
  } catch (const qcarrier::ValidationError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return kConsistencyError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::length_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }

  if (chosen == "check" && !qc::all_checks_passed(table)) {
    std::cerr << "some checks failed\n";
    return kConsistencyError;
  }
  return 0;
}
