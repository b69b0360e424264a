#include "qcarrier/densekernel.hpp"

#include <random>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace qcarrier;

TEST(DenseKernel, tensor_of_basis_projectors) {
  const DensityMatrix a(PureState::basis("0"));
  const DensityMatrix b(PureState::basis("1"));
  const DensityMatrix ab = tensor(a, b);
  EXPECT_EQ(ab.n_qubits(), 2U);
  EXPECT_LT(ab.distance_max(DensityMatrix(PureState::basis("01"))), kIdentityTol);
}

TEST(DenseKernel, tensor_then_trace_out_right_factor) {
  std::mt19937_64 rng(7);
  const DensityMatrix rho = testing_util::random_density(2, rng);
  const DensityMatrix joint = tensor(rho, DensityMatrix::maximally_mixed(1));
  EXPECT_LT(partial_trace(joint, {0, 1}).distance_max(rho), kIdentityTol);
}

TEST(DenseKernel, tensor_rejects_register_over_cap) {
  const DensityMatrix a = DensityMatrix::maximally_mixed(3);
  EXPECT_THROW(tensor(a, a, 5), CapacityError);
  EXPECT_NO_THROW(tensor(a, a, 6));
}

TEST(DenseKernel, pre_upload_state_matches_handwritten_amplitudes) {
  // |GHZ> (x) |qq> for q = 1: amplitudes 1/sqrt2 on |00011> and |11111>.
  const double s = 1.0 / std::sqrt(2.0);
  Vector ghz = Vector::Zero(8);
  ghz[0] = s;
  ghz[7] = s;
  const DensityMatrix joint =
      tensor(DensityMatrix(PureState(ghz)), DensityMatrix(PureState::basis("11")));
  Matrix expected = Matrix::Zero(32, 32);
  for (int r : {0b00011, 0b11111}) {
    for (int c : {0b00011, 0b11111}) expected(r, c) = 0.5;
  }
  EXPECT_LT((joint.matrix() - expected).cwiseAbs().maxCoeff(), kIdentityTol);
}

TEST(DenseKernel, apply_x_flips_basis_state) {
  const DensityMatrix out = apply_unitary(DensityMatrix(PureState::basis("0")), gates::x(), {0});
  EXPECT_LT(out.distance_max(DensityMatrix(PureState::basis("1"))), kIdentityTol);
}

TEST(DenseKernel, hadamard_twice_is_identity) {
  std::mt19937_64 rng(11);
  const DensityMatrix rho = testing_util::random_density(3, rng);
  DensityMatrix out = rho;
  for (int rep = 0; rep < 2; ++rep) {
    for (std::size_t q = 0; q < 3; ++q) out = apply_unitary(out, gates::h(), {q});
  }
  EXPECT_LT(out.distance_max(rho), kIdentityTol);
}

TEST(DenseKernel, cnot_on_parity_state_gives_plus_times_q) {
  // C_{1,2} (|0q> + |1~q>)/sqrt2 = |+>|q>, checked for both q.
  const double s = 1.0 / std::sqrt(2.0);
  for (int q = 0; q < 2; ++q) {
    Vector parity = Vector::Zero(4);
    parity[q] = s;            // |0 q>
    parity[2 + (1 - q)] = s;  // |1 ~q>
    const PureState out = apply_unitary(PureState(parity), gates::cnot(), {0, 1});
    Vector expected = Vector::Zero(4);
    expected[q] = s;      // |0 q>
    expected[2 + q] = s;  // |1 q>
    EXPECT_LT((out.amplitudes() - expected).cwiseAbs().maxCoeff(), kIdentityTol);
  }
}

TEST(DenseKernel, cnot_with_reversed_targets_uses_first_as_control) {
  const PureState out = apply_unitary(PureState::basis("01"), gates::cnot(), {1, 0});
  EXPECT_NEAR(overlap(out, PureState::basis("11")), 1.0, kIdentityTol);
}

TEST(DenseKernel, apply_unitary_errors) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  Matrix not_unitary = gates::x();
  not_unitary(0, 1) = 2.0;
  EXPECT_THROW(apply_unitary(rho, not_unitary, {0}), ValidationError);
  EXPECT_THROW(apply_unitary(rho, gates::cnot(), {1, 1}), ArgumentError);
  EXPECT_THROW(apply_unitary(rho, gates::x(), {2}), ArgumentError);
  EXPECT_THROW(apply_unitary(rho, gates::cnot(), {0}), ArgumentError);
}

TEST(DenseKernel, partial_trace_of_bell_state_is_maximally_mixed) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector bell = Vector::Zero(4);
  bell[0] = s;
  bell[3] = s;
  const DensityMatrix rho{PureState(bell)};
  EXPECT_LT(partial_trace(rho, {0}).distance_max(DensityMatrix::maximally_mixed(1)),
            kIdentityTol);
  EXPECT_LT(partial_trace(rho, {1}).distance_max(DensityMatrix::maximally_mixed(1)),
            kIdentityTol);
}

TEST(DenseKernel, partial_trace_of_uploaded_state) {
  // |Psi_even> for q=0: (|000>|00> + |111>|11>)/sqrt2.
  const double s = 1.0 / std::sqrt(2.0);
  Vector psi = Vector::Zero(32);
  psi[0b00000] = s;
  psi[0b11111] = s;
  const DensityMatrix rho{PureState(psi)};

  Matrix carrier = Matrix::Zero(8, 8);
  carrier(0, 0) = carrier(7, 7) = 0.5;
  EXPECT_LT((partial_trace(rho, {0, 1, 2}).matrix() - carrier).cwiseAbs().maxCoeff(),
            kIdentityTol);

  // The message in flight is the mixture of |qq> and |~q~q>.
  Matrix message = Matrix::Zero(4, 4);
  message(0, 0) = message(3, 3) = 0.5;
  EXPECT_LT((partial_trace(rho, {3, 4}).matrix() - message).cwiseAbs().maxCoeff(), kIdentityTol);
}

TEST(DenseKernel, partial_trace_orders_kept_qubits_ascending) {
  const DensityMatrix rho(PureState::basis("011"));
  EXPECT_LT(partial_trace(rho, {2, 0}).distance_max(DensityMatrix(PureState::basis("01"))),
            kIdentityTol);
}

TEST(DenseKernel, partial_trace_errors) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  EXPECT_THROW(partial_trace(rho, {}), ArgumentError);
  EXPECT_THROW(partial_trace(rho, {0, 0}), ArgumentError);
  EXPECT_THROW(partial_trace(rho, {2}), ArgumentError);
}

TEST(DenseKernel, fidelity_examples) {
  const PureState zero = PureState::basis("0");
  const PureState one = PureState::basis("1");
  EXPECT_NEAR(fidelity_pure(DensityMatrix(zero), zero), 1.0, kIdentityTol);
  EXPECT_NEAR(fidelity_pure(DensityMatrix(zero), one), 0.0, kIdentityTol);
  const double p = 0.37;
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1 - p;
  m(1, 1) = p;
  EXPECT_NEAR(fidelity_pure(DensityMatrix(m), zero), 1 - p, kIdentityTol);
  EXPECT_THROW(fidelity_pure(DensityMatrix::maximally_mixed(2), zero), ArgumentError);
}

TEST(DenseKernel, fidelity_ignores_global_phase) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = testing_util::random_density(2, rng);
    const PureState psi = testing_util::random_pure(2, rng);
    const PureState rotated(psi.amplitudes() * std::polar(1.0, 0.3 * t + 0.1));
    EXPECT_NEAR(fidelity_pure(rho, psi), fidelity_pure(rho, rotated), kIdentityTol);
  }
}

TEST(DenseKernel, trace_distance_examples) {
  std::mt19937_64 rng(5);
  const DensityMatrix rho = testing_util::random_density(2, rng);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, kIdentityTol);
  EXPECT_NEAR(trace_distance(DensityMatrix(PureState::basis("0")),
                             DensityMatrix(PureState::basis("1"))),
              1.0, kIdentityTol);

  // (1-p)GHZ + p GHZ' against GHZ: difference is p(GHZ' - GHZ), trace norm 2p.
  const double s = 1.0 / std::sqrt(2.0);
  Vector ghz = Vector::Zero(8), ghz_minus = Vector::Zero(8);
  ghz[0] = ghz[7] = s;
  ghz_minus[0] = s;
  ghz_minus[7] = -s;
  const Matrix g = ghz * ghz.adjoint();
  const Matrix gm = ghz_minus * ghz_minus.adjoint();
  for (double p : {0.0, 0.1, 0.25, 0.5}) {
    const DensityMatrix mixed((1 - p) * g + p * gm);
    EXPECT_NEAR(trace_distance(mixed, DensityMatrix(g)), p, kIdentityTol);
  }
  EXPECT_THROW(trace_distance(rho, DensityMatrix::maximally_mixed(1)), ArgumentError);
}

TEST(DenseKernel, density_matrix_validation) {
  Matrix bad_trace = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{bad_trace}, ValidationError);
  Matrix non_hermitian = 0.5 * Matrix::Identity(2, 2);
  non_hermitian(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix{non_hermitian}, ValidationError);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{negative}, ValidationError);
  EXPECT_THROW(DensityMatrix{Matrix::Identity(3, 3) / 3.0}, ValidationError);
}

TEST(DenseKernel, pure_state_validation) {
  Vector v = Vector::Ones(4);
  EXPECT_THROW(PureState{v}, ValidationError);
  EXPECT_THROW(PureState{Vector::Ones(3) / std::sqrt(3.0)}, ValidationError);
  EXPECT_NO_THROW(PureState{v / 2.0});
}

TEST(DenseKernel, layout_roles_and_errors) {
  const RegisterLayout layout = RegisterLayout::protocol(2);
  EXPECT_EQ(layout.labels(), (std::vector<std::string>{"A", "B", "C", "1", "2"}));
  EXPECT_EQ(layout.position("C"), 2U);
  EXPECT_EQ(layout.position("2"), 4U);
  EXPECT_THROW(layout.position("D"), ArgumentError);
  EXPECT_THROW(RegisterLayout({"A", "A"}), ArgumentError);
}

// Properties over random inputs.

TEST(DenseKernelProperties, unitary_preserves_trace_and_hermiticity) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 4;
    const DensityMatrix rho = testing_util::random_density(n, rng);
    const std::size_t k = 1 + (t % std::min<std::size_t>(n, 2));
    Positions targets;
    for (std::size_t q = 0; q < n && targets.size() < k; ++q) {
      if ((t + q) % 2 == 0 || n - q <= k - targets.size()) targets.push_back(q);
    }
    const Matrix u = testing_util::random_unitary(k, rng);
    const DensityMatrix out = apply_unitary(rho, u, targets);
    EXPECT_LT(std::abs(out.matrix().trace() - Complex(1.0, 0.0)), kStructuralTol);
    EXPECT_LT((out.matrix() - out.matrix().adjoint()).cwiseAbs().maxCoeff(), kStructuralTol);
    EXPECT_EQ(density_defect(out.matrix()), "");
    // Agrees with the explicitly embedded operator.
    const Matrix full = embed(u, targets, n);
    EXPECT_LT((out.matrix() - full * rho.matrix() * full.adjoint()).cwiseAbs().maxCoeff(),
              kIdentityTol);
  }
}

TEST(DenseKernelProperties, partial_trace_inverts_tensor) {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 20; ++t) {
    const std::size_t na = 1 + t % 3;
    const std::size_t nb = 1 + (t / 3) % 3;
    const DensityMatrix a = testing_util::random_density(na, rng);
    const DensityMatrix b = testing_util::random_density(nb, rng);
    Positions keep;
    for (std::size_t q = 0; q < na; ++q) keep.push_back(q);
    EXPECT_LT(partial_trace(tensor(a, b), keep).distance_max(a), kIdentityTol);
  }
}

TEST(DenseKernelProperties, trace_distance_is_a_metric) {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix a = testing_util::random_density(2, rng);
    const DensityMatrix b = testing_util::random_density(2, rng);
    const DensityMatrix c = testing_util::random_density(2, rng);
    EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-12);
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-9);
    EXPECT_GE(trace_distance(a, b), 0.0);
    EXPECT_LE(trace_distance(a, b), 1.0 + 1e-12);
  }
}
