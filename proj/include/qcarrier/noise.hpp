#pragma once

// Noisy carriers: de-phasing (GHZ mixed with GHZ'), global depolarizing,
// and de-phasing induced by random phase kicks exp(i theta Z) on each qubit.

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcarrier/densekernel.hpp"
#include "qcarrier/pauli_word.hpp"
#include "qcarrier/states.hpp"

namespace qcarrier {

inline constexpr double kProbabilityTol = 1e-9;

namespace detail {

inline void check_probability(double p, double upper, const char* what) {
  if (!(p >= 0.0 && p <= upper)) {
    throw ArgumentError(std::string(what) + " p=" + std::to_string(p) + " outside [0, " +
                        std::to_string(upper) + "]");
  }
}

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace detail

struct KickSample {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double weight = 0.0;
};

/// Empirical distribution of phase kicks (radians) on the three carrier qubits.
class KickSet {
 public:
  explicit KickSet(std::vector<KickSample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw ArgumentError("kick set is empty");
    detail::CompensatedSum total;
    for (const auto& s : samples_) {
      if (!(s.weight >= 0.0)) throw ArgumentError("kick weight must be nonnegative");
      total.add(s.weight);
    }
    if (std::abs(total.value() - 1.0) > kProbabilityTol) {
      throw ArgumentError("kick weights sum to " + std::to_string(total.value()) + ", not 1");
    }
  }

  /// Equal-weight sample set.
  static KickSet uniform(const std::vector<std::array<double, 3>>& thetas) {
    std::vector<KickSample> samples;
    samples.reserve(thetas.size());
    const double w = thetas.empty() ? 0.0 : 1.0 / static_cast<double>(thetas.size());
    for (const auto& t : thetas) samples.push_back({t[0], t[1], t[2], w});
    return KickSet(std::move(samples));
  }

  static KickSet point(double theta1, double theta2, double theta3) {
    return KickSet({{theta1, theta2, theta3, 1.0}});
  }

  /// P(-theta).
  KickSet mirrored() const {
    std::vector<KickSample> out = samples_;
    for (auto& s : out) {
      s.theta1 = -s.theta1;
      s.theta2 = -s.theta2;
      s.theta3 = -s.theta3;
    }
    return KickSet(std::move(out));
  }

  const std::vector<KickSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<KickSample> samples_;
};

/// Reads a kick table: one header line, then rows of three angle columns and
/// an optional weight column, separated by commas and/or whitespace. Rows
/// without weights are equally weighted.
inline KickSet parse_kicks(std::istream& in) {
  std::string line;
  auto split = [](const std::string& text) {
    std::string normalized = text;
    for (char& c : normalized) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream fields(normalized);
    std::vector<std::string> out;
    for (std::string f; fields >> f;) out.push_back(f);
    return out;
  };
  auto to_number = [](const std::string& s) -> std::optional<double> {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) return std::nullopt;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };

  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t columns = 0;
  std::vector<KickSample> samples;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split(line);
    if (fields.empty()) continue;
    if (!have_header) {
      if (fields.size() != 3 && fields.size() != 4) {
        throw ArgumentError("kick file header must name 3 or 4 columns");
      }
      if (to_number(fields[0])) throw ArgumentError("kick file is missing its header line");
      columns = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != columns) {
      throw ArgumentError("kick file line " + std::to_string(line_no) + ": expected " +
                          std::to_string(columns) + " columns");
    }
    std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < columns; ++c) {
      auto num = to_number(fields[c]);
      if (!num) {
        throw ArgumentError("kick file line " + std::to_string(line_no) + ": bad number '" +
                            fields[c] + "'");
      }
      v[c] = *num;
    }
    samples.push_back({v[0], v[1], v[2], v[3]});
  }
  if (!have_header) throw ArgumentError("kick file is empty");
  if (samples.empty()) throw ArgumentError("kick file has no samples");
  if (columns == 3) {
    const double w = 1.0 / static_cast<double>(samples.size());
    for (auto& s : samples) s.weight = w;
  }
  return KickSet(std::move(samples));
}

inline KickSet load_kick_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open kick file '" + path + "'");
  return parse_kicks(in);
}

struct KickEstimate {
  double p = 0.0;
  double std_error = 0.0;
  // Imaginary part of p = -(1/2) E[sin 2(theta1+theta2+theta3)]; zero for even P.
  double imaginary = 0.0;
  double imaginary_std_error = 0.0;
  bool asymmetric = false;
  std::string diagnostic;
};

/// p = (1/2)(1 - E[exp(2i(theta1+theta2+theta3))]) over the kick set.
inline KickEstimate p_from_kicks(const KickSet& kicks) {
  detail::CompensatedSum cos_sum;
  detail::CompensatedSum sin_sum;
  for (const auto& s : kicks.samples()) {
    const double phase = 2.0 * (s.theta1 + s.theta2 + s.theta3);
    cos_sum.add(s.weight * std::cos(phase));
    sin_sum.add(s.weight * std::sin(phase));
  }
  const double cos_mean = cos_sum.value();
  const double sin_mean = sin_sum.value();

  detail::CompensatedSum cos_var;
  detail::CompensatedSum sin_var;
  for (const auto& s : kicks.samples()) {
    const double phase = 2.0 * (s.theta1 + s.theta2 + s.theta3);
    const double dc = std::cos(phase) - cos_mean;
    const double ds = std::sin(phase) - sin_mean;
    cos_var.add(s.weight * s.weight * dc * dc);
    sin_var.add(s.weight * s.weight * ds * ds);
  }

  KickEstimate est;
  est.p = 0.5 * (1.0 - cos_mean);
  est.std_error = 0.5 * std::sqrt(std::max(0.0, cos_var.value()));
  est.imaginary = -0.5 * sin_mean;
  est.imaginary_std_error = 0.5 * std::sqrt(std::max(0.0, sin_var.value()));
  if (std::abs(est.imaginary) > 3.0 * est.imaginary_std_error + kIdentityTol) {
    est.asymmetric = true;
    std::ostringstream msg;
    msg << "kick distribution looks asymmetric: Im(p) = " << est.imaginary << " (std error "
        << est.imaginary_std_error << ")";
    est.diagnostic = msg.str();
  }
  return est;
}

/// (1-p)|GHZ><GHZ| + p|GHZ'><GHZ'|, p in [0, 1].
inline DensityMatrix dephased_carrier(double p, std::size_t n_qubits = 3) {
  detail::check_probability(p, 1.0, "de-phasing");
  const Matrix m = (1.0 - p) * ghz_state(n_qubits, GhzSign::plus).projector() +
                   p * ghz_state(n_qubits, GhzSign::minus).projector();
  return DensityMatrix(m);
}

/// (1-2p)|GHZ><GHZ| + p|0..0><0..0| + p|1..1><1..1|, p in [0, 1/2].
inline DensityMatrix dephased_carrier_diagonal(double p, std::size_t n_qubits = 3) {
  detail::check_probability(p, 0.5, "de-phasing (diagonal form)");
  const auto dim = Eigen::Index{1} << n_qubits;
  Matrix m = (1.0 - 2.0 * p) * ghz_state(n_qubits, GhzSign::plus).projector();
  m(0, 0) += p;
  m(dim - 1, dim - 1) += p;
  return DensityMatrix(m);
}

/// (1-p)|GHZ><GHZ| + (p/2^n) I, p in [0, 1].
inline DensityMatrix depolarized_carrier(double p, std::size_t n_qubits = 3) {
  detail::check_probability(p, 1.0, "depolarizing");
  const auto dim = Eigen::Index{1} << n_qubits;
  const Matrix m = (1.0 - p) * ghz_state(n_qubits, GhzSign::plus).projector() +
                   (p / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  return DensityMatrix(m);
}

enum class NoiseKind { none, dephasing, depolarizing, kicks };

inline std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none:
      return "none";
    case NoiseKind::dephasing:
      return "dephasing";
    case NoiseKind::depolarizing:
      return "depolarizing";
    case NoiseKind::kicks:
      return "kicks";
  }
  return "?";
}

inline NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "none") return NoiseKind::none;
  if (s == "dephasing") return NoiseKind::dephasing;
  if (s == "depolarizing") return NoiseKind::depolarizing;
  if (s == "kicks") return NoiseKind::kicks;
  throw ArgumentError("unknown noise kind '" + s + "'");
}

/// How the carrier is contaminated before the first round.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double p = 0.0;
  std::optional<KickSet> kicks;

  static NoiseSpec none() { return {}; }
  static NoiseSpec dephasing(double p) {
    detail::check_probability(p, 1.0, "de-phasing");
    return {NoiseKind::dephasing, p, std::nullopt};
  }
  static NoiseSpec depolarizing(double p) {
    detail::check_probability(p, 1.0, "depolarizing");
    return {NoiseKind::depolarizing, p, std::nullopt};
  }
  static NoiseSpec from_kicks(KickSet kicks) {
    return {NoiseKind::kicks, 0.0, std::move(kicks)};
  }

  /// Replaces a kick distribution by the equivalent de-phasing parameter.
  NoiseSpec resolved() const {
    if (kind != NoiseKind::kicks) return *this;
    if (!kicks) throw ArgumentError("kick noise without a kick set");
    return dephasing(p_from_kicks(*kicks).p);
  }
};

/// GHZ carrier on n_qubits contaminated according to `spec`.
inline DensityMatrix noisy_carrier(const NoiseSpec& spec, std::size_t n_qubits = 3) {
  const NoiseSpec r = spec.resolved();
  switch (r.kind) {
    case NoiseKind::none:
      return DensityMatrix(ghz_state(n_qubits));
    case NoiseKind::dephasing:
      return dephased_carrier(r.p, n_qubits);
    case NoiseKind::depolarizing:
      return depolarized_carrier(r.p, n_qubits);
    case NoiseKind::kicks:
      break;
  }
  throw ArgumentError("unresolved noise spec");
}

/// Pauli-conjugated mixture sum_w pi_w w|ref><ref|w^dagger.
class PauliMixture {
 public:
  struct Term {
    PauliWord word;
    double probability = 0.0;
  };

  explicit PauliMixture(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw ArgumentError("empty Pauli mixture");
    detail::CompensatedSum total;
    for (const auto& t : terms_) {
      if (!(t.probability >= 0.0)) throw ArgumentError("negative mixture probability");
      if (t.word.n_qubits() != terms_.front().word.n_qubits()) {
        throw ArgumentError("mixture words of different sizes");
      }
      total.add(t.probability);
    }
    if (std::abs(total.value() - 1.0) > kProbabilityTol) {
      throw ArgumentError("mixture probabilities sum to " + std::to_string(total.value()));
    }
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t n_qubits() const { return terms_.front().word.n_qubits(); }

  Matrix applied_to(const PureState& reference) const {
    if (reference.n_qubits() != n_qubits()) throw ArgumentError("mixture/reference size mismatch");
    Matrix rho = Matrix::Zero(reference.dim(), reference.dim());
    const Matrix proj = reference.projector();
    for (const auto& t : terms_) {
      const Matrix w = t.word.to_matrix();
      rho += t.probability * (w * proj * w.adjoint());
    }
    return rho;
  }

 private:
  std::vector<Term> terms_;
};

namespace detail {

// One representative x per class {x, ~x}: fewer flips than half, ties broken
// toward words that flip position 0.
inline bool is_flip_representative(std::uint64_t x, std::size_t n) {
  const auto w = static_cast<std::size_t>(std::popcount(x));
  if (2 * w < n) return true;
  if (2 * w > n) return false;
  return (x & 1U) != 0;
}

}  // namespace detail

/// Pauli mixture on the GHZ reference state reproducing the noisy carrier.
/// De-phasing: {I: 1-p, Z_A: p}. Depolarizing: each GHZ-basis projector gets
/// p/2^n through one word X^x (Z on A for the minus-sign states), and the
/// identity absorbs the extra 1-p.
inline PauliMixture as_pauli_mixture(const NoiseSpec& spec, std::size_t n_qubits = 3) {
  if (spec.kind == NoiseKind::kicks) {
    throw UnsupportedError("kick noise: convert with p_from_kicks (NoiseSpec::resolved) first");
  }
  detail::check_party_count(n_qubits, 30);
  const PauliWord identity(n_qubits);
  std::vector<PauliMixture::Term> terms;
  auto add = [&terms](PauliWord w, double prob) {
    if (prob > 0.0) terms.push_back({std::move(w), prob});
  };

  switch (spec.kind) {
    case NoiseKind::none:
      add(identity, 1.0);
      break;
    case NoiseKind::dephasing:
      detail::check_probability(spec.p, 1.0, "de-phasing");
      add(identity, 1.0 - spec.p);
      add(PauliWord::single(n_qubits, 0, 'Z'), spec.p);
      break;
    case NoiseKind::depolarizing: {
      detail::check_probability(spec.p, 1.0, "depolarizing");
      const double each = spec.p / static_cast<double>(std::uint64_t{1} << n_qubits);
      add(identity, 1.0 - spec.p + each);
      for (int primed = 0; primed < 2; ++primed) {
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n_qubits); ++x) {
          if (!detail::is_flip_representative(x, n_qubits)) continue;
          if (x == 0 && primed == 0) continue;
          std::string s(n_qubits, 'I');
          for (std::size_t q = 0; q < n_qubits; ++q) {
            if ((x >> q) & 1U) s[q] = 'X';
          }
          if (primed) s[0] = s[0] == 'X' ? 'Y' : 'Z';
          add(PauliWord::parse(s), each);
        }
      }
      break;
    }
    case NoiseKind::kicks:
      break;
  }
  return PauliMixture(std::move(terms));
}

}  // namespace qcarrier
