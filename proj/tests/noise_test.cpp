#include "qcarrier/noise.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace qcarrier;
using testing_util::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix ghz_projector(GhzSign sign = GhzSign::plus) { return ghz_state(3, sign).projector(); }

// sum_i (p/8)|G_i><G_i| over the octet, with (1-p) extra on G_0.
Matrix octet_decomposition(double p) {
  Matrix m = (1.0 - p) * ghz_projector();
  for (const GhzLabel& label : kGhzOctet) m += (p / 8.0) * ghz_basis_state(label).projector();
  return m;
}

}  // namespace

TEST(Noise, dephased_carrier_examples) {
  EXPECT_LT(max_abs(dephased_carrier(0.0).matrix() - ghz_projector()), kIdentityTol);

  Matrix half = Matrix::Zero(8, 8);
  half(0, 0) = half(7, 7) = 0.5;
  EXPECT_LT(max_abs(dephased_carrier(0.5).matrix() - half), kIdentityTol);

  EXPECT_NEAR(dephased_carrier(0.1)(0, 7).real(), 0.4, kIdentityTol);
}

TEST(Noise, dephased_forms_agree) {
  for (double p : {0.0, 0.05, 0.1, 0.25, 0.4, 0.5}) {
    EXPECT_LT(max_abs(dephased_carrier(p).matrix() - dephased_carrier_diagonal(p).matrix()),
              kIdentityTol)
        << p;
  }
  EXPECT_THROW(dephased_carrier_diagonal(0.6), ArgumentError);
  EXPECT_NO_THROW(dephased_carrier(0.6));
  EXPECT_THROW(dephased_carrier(-0.1), ArgumentError);
  EXPECT_THROW(dephased_carrier(1.1), ArgumentError);
}

TEST(Noise, depolarized_carrier_examples) {
  EXPECT_LT(max_abs(depolarized_carrier(0.0).matrix() - ghz_projector()), kIdentityTol);
  EXPECT_LT(max_abs(depolarized_carrier(1.0).matrix() - Matrix::Identity(8, 8) / 8.0), kIdentityTol);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(depolarized_carrier(0.4).matrix());
  const auto& values = eig.eigenvalues();
  for (Eigen::Index i = 0; i < 7; ++i) EXPECT_NEAR(values[i], 0.05, kIdentityTol);
  EXPECT_NEAR(values[7], 0.65, kIdentityTol);
  const Vector top = eig.eigenvectors().col(7);
  EXPECT_NEAR(std::norm(top.dot(ghz_state(3).amplitudes())), 1.0, kIdentityTol);
  EXPECT_THROW(depolarized_carrier(1.5), ArgumentError);
}

TEST(Noise, depolarized_carrier_matches_octet_decomposition) {
  for (double p : {0.0, 0.1, 0.25, 0.5, 1.0}) {
    EXPECT_LT(max_abs(depolarized_carrier(p).matrix() - octet_decomposition(p)), kIdentityTol) << p;
  }
}

TEST(Noise, carriers_are_valid_states) {
  for (double p : {0.0, 0.2, 0.5}) {
    EXPECT_EQ(density_defect(dephased_carrier(p).matrix()), "");
    EXPECT_EQ(density_defect(dephased_carrier_diagonal(p).matrix()), "");
    EXPECT_EQ(density_defect(depolarized_carrier(p).matrix()), "");
  }
}

TEST(Noise, pauli_mixture_examples) {
  const PauliMixture deph = as_pauli_mixture(NoiseSpec::dephasing(0.3));
  ASSERT_EQ(deph.terms().size(), 2U);
  EXPECT_EQ(deph.terms()[0].word.to_string(), "+III");
  EXPECT_NEAR(deph.terms()[0].probability, 0.7, kIdentityTol);
  EXPECT_EQ(deph.terms()[1].word.to_string(), "+ZII");
  EXPECT_NEAR(deph.terms()[1].probability, 0.3, kIdentityTol);

  const PauliMixture zero = as_pauli_mixture(NoiseSpec::depolarizing(0.0));
  ASSERT_EQ(zero.terms().size(), 1U);
  EXPECT_TRUE(zero.terms()[0].word.is_identity_up_to_phase());

  // One word per GHZ-basis projector; the identity also carries the G_0 share.
  const double p = 0.4;
  const PauliMixture depol = as_pauli_mixture(NoiseSpec::depolarizing(p));
  ASSERT_EQ(depol.terms().size(), 8U);
  EXPECT_NEAR(depol.terms()[0].probability, 1.0 - p + p / 8.0, kIdentityTol);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_NEAR(depol.terms()[i].probability, p / 8.0, kIdentityTol);
  std::vector<std::string> words;
  for (const auto& t : depol.terms()) words.push_back(t.word.to_string());
  const std::vector<std::string> expected{"+III", "+XII", "+IXI", "+IIX",
                                          "+ZII", "+YII", "+ZXI", "+ZIX"};
  EXPECT_EQ(words, expected);

  EXPECT_THROW(as_pauli_mixture(NoiseSpec::from_kicks(KickSet::point(0, 0, 0))), UnsupportedError);
}

TEST(Noise, pauli_mixture_reconstructs_carrier) {
  for (std::size_t n : {3U, 4U, 5U}) {
    const PureState ref = ghz_state(n);
    for (double p : {0.0, 0.1, 0.25, 0.5, 1.0}) {
      EXPECT_LT(max_abs(as_pauli_mixture(NoiseSpec::dephasing(p), n).applied_to(ref) -
                        dephased_carrier(p, n).matrix()),
                kIdentityTol);
      EXPECT_LT(max_abs(as_pauli_mixture(NoiseSpec::depolarizing(p), n).applied_to(ref) -
                        depolarized_carrier(p, n).matrix()),
                kIdentityTol);
    }
  }
}

TEST(Noise, kick_point_masses) {
  EXPECT_NEAR(p_from_kicks(KickSet::point(0, 0, 0)).p, 0.0, kIdentityTol);
  EXPECT_NEAR(p_from_kicks(KickSet::point(kPi / 2, 0, 0)).p, 1.0, kIdentityTol);
  const KickEstimate skew = p_from_kicks(KickSet::point(kPi / 8, 0, 0));
  EXPECT_NEAR(skew.imaginary, -0.5 * std::sin(kPi / 4), kIdentityTol);
  EXPECT_TRUE(skew.asymmetric);
  EXPECT_FALSE(skew.diagnostic.empty());
}

TEST(Noise, kick_gaussian_matches_closed_form) {
  std::mt19937_64 rng(99);
  for (double sigma : {0.1, 0.3}) {
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<std::array<double, 3>> thetas(200000);
    for (auto& t : thetas) t = {g(rng), g(rng), g(rng)};
    const KickEstimate est = p_from_kicks(KickSet::uniform(thetas));
    const double exact = 0.5 * (1.0 - std::exp(-6.0 * sigma * sigma));
    EXPECT_LT(std::abs(est.p - exact), 3.0 * est.std_error) << sigma;
    EXPECT_FALSE(est.asymmetric);
  }
}

TEST(Noise, kick_mirror_is_exact) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.1, 0.4);
  std::vector<std::array<double, 3>> thetas(1000);
  for (auto& t : thetas) t = {g(rng), g(rng), g(rng)};
  const KickSet kicks = KickSet::uniform(thetas);
  EXPECT_EQ(p_from_kicks(kicks).p, p_from_kicks(kicks.mirrored()).p);
  EXPECT_EQ(p_from_kicks(kicks).imaginary, -p_from_kicks(kicks.mirrored()).imaginary);
}

TEST(Noise, kick_p_matches_dense_phase_kicks) {
  // Averaging exp(i theta_k Z_k) kicks over the GHZ carrier gives the
  // de-phased carrier with p from the kick integral.
  const std::vector<std::array<double, 3>> thetas{
      {0.2, -0.1, 0.05}, {-0.2, 0.1, -0.05}, {0.4, 0.3, -0.2}, {-0.4, -0.3, 0.2}};
  const KickSet kicks = KickSet::uniform(thetas);
  Matrix avg = Matrix::Zero(8, 8);
  const DensityMatrix ghz(ghz_state(3));
  for (const auto& s : kicks.samples()) {
    DensityMatrix rho = ghz;
    const double th[] = {s.theta1, s.theta2, s.theta3};
    for (std::size_t q = 0; q < 3; ++q) rho = apply_unitary(rho, gates::phase_kick(th[q]), {q});
    avg += s.weight * rho.matrix();
  }
  const KickEstimate est = p_from_kicks(kicks);
  EXPECT_LT(max_abs(avg - dephased_carrier(est.p).matrix()), kIdentityTol);
}

TEST(Noise, kick_set_validation) {
  EXPECT_THROW(KickSet({}), ArgumentError);
  EXPECT_THROW(KickSet({{0, 0, 0, 0.5}}), ArgumentError);
  EXPECT_THROW(KickSet({{0, 0, 0, -0.5}, {0, 0, 0, 1.5}}), ArgumentError);
}

TEST(Noise, kick_file_parsing) {
  std::istringstream weighted("t1,t2,t3,w\n0,0,0,0.25\n1.5707963267948966,0,0,0.75\n");
  const KickSet a = parse_kicks(weighted);
  ASSERT_EQ(a.size(), 2U);
  EXPECT_NEAR(p_from_kicks(a).p, 0.75, 1e-12);

  std::istringstream spaced("theta1 theta2 theta3\n0 0 0\n0.1 0.2 0.3\n");
  const KickSet b = parse_kicks(spaced);
  ASSERT_EQ(b.size(), 2U);
  EXPECT_NEAR(b.samples()[1].weight, 0.5, 1e-15);

  std::istringstream no_header("0,0,0\n");
  EXPECT_THROW(parse_kicks(no_header), ArgumentError);
  std::istringstream ragged("a,b,c\n0,0,0\n0,0\n");
  EXPECT_THROW(parse_kicks(ragged), ArgumentError);

  const std::string path = ::testing::TempDir() + "kicks.csv";
  {
    std::ofstream out(path);
    out << "t1,t2,t3\n0.1,0,0\n-0.1,0,0\n";
  }
  EXPECT_NEAR(p_from_kicks(load_kick_file(path)).p, 0.5 * (1 - std::cos(0.2)), 1e-12);
  std::remove(path.c_str());
  EXPECT_THROW(load_kick_file(path), ArgumentError);
}

TEST(Noise, noise_spec_resolution) {
  EXPECT_EQ(parse_noise_kind("depolarizing"), NoiseKind::depolarizing);
  EXPECT_THROW(parse_noise_kind("amplitude"), ArgumentError);
  const NoiseSpec kicks = NoiseSpec::from_kicks(KickSet::point(kPi / 4, 0, 0));
  const NoiseSpec r = kicks.resolved();
  EXPECT_EQ(r.kind, NoiseKind::dephasing);
  EXPECT_NEAR(r.p, 0.5, 1e-12);
  EXPECT_LT(max_abs(noisy_carrier(kicks).matrix() - dephased_carrier(0.5).matrix()), kIdentityTol);
  EXPECT_LT(max_abs(noisy_carrier(NoiseSpec::none(), 4).matrix() - ghz_state(4).projector()),
            kIdentityTol);
  EXPECT_THROW(NoiseSpec::depolarizing(1.2), ArgumentError);
}
