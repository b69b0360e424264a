#pragma once

// Process tomography of qubit-input maps by linearity over the probe states
// |0>, |1>, |+>, |+i>.

#include <array>
#include <functional>

#include "qcarrier/densekernel.hpp"

namespace qcarrier {

/// A linear map from single-qubit states to states of any size.
using QubitMap = std::function<Matrix(const DensityMatrix&)>;

/// Images of |0><0|, |0><1|, |1><0|, |1><1| (in that order).
inline std::array<Matrix, 4> operator_basis_images(const QubitMap& map) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  const Matrix out0 = map(DensityMatrix(PureState::qubit(1.0, 0.0)));
  const Matrix out1 = map(DensityMatrix(PureState::qubit(0.0, 1.0)));
  const Matrix out_plus = map(DensityMatrix(PureState::qubit(s, s)));
  const Matrix out_plus_i = map(DensityMatrix(PureState::qubit(s, s * i)));
  const Matrix diag = out0 + out1;
  // |+><+| + i|+i><+i| = |0><1| + (1+i)/2 (|0><0| + |1><1|)
  const Matrix e01 = out_plus + i * out_plus_i - 0.5 * (1.0 + i) * diag;
  const Matrix e10 = out_plus - i * out_plus_i - 0.5 * (1.0 - i) * diag;
  return {out0, e01, e10, out1};
}

/// Choi matrix sum_ab |a><b| (x) Phi(|a><b|) of a qubit-to-qubit map.
inline Matrix choi_matrix(const std::array<Matrix, 4>& images) {
  Matrix j = Matrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) j.block(2 * a, 2 * b, 2, 2) = images[2 * a + b];
  }
  return j;
}

struct PauliTransfer {
  // chi-matrix diagonal in the order I, X, Y, Z.
  std::array<double, 4> weights{};
  // Largest |chi_jk|, j != k; zero for a Pauli channel.
  double off_diagonal = 0.0;
  // Largest deviation of tr Phi(|a><b|) from delta_ab.
  double trace_defect = 0.0;
};

/// Chi matrix of a qubit channel in the Pauli basis, chi_jk = <<P_j|J|P_k>>/4.
inline PauliTransfer pauli_transfer(const std::array<Matrix, 4>& images) {
  const Matrix choi = choi_matrix(images);
  const std::array<Matrix, 4> paulis{gates::identity(), gates::x(), gates::y(), gates::z()};
  std::array<Vector, 4> vec;
  for (int k = 0; k < 4; ++k) {
    vec[k] = Vector::Zero(4);
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) vec[k][2 * a + c] = paulis[k](c, a);
    }
  }
  PauliTransfer out;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      const Complex chi = vec[j].dot(choi * vec[k]) / 4.0;
      if (j == k) {
        out.weights[j] = chi.real();
      } else {
        out.off_diagonal = std::max(out.off_diagonal, std::abs(chi));
      }
    }
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Complex expected = a == b ? 1.0 : 0.0;
      out.trace_defect = std::max(out.trace_defect, std::abs(images[2 * a + b].trace() - expected));
    }
  }
  return out;
}

inline PauliTransfer pauli_transfer(const QubitMap& map) {
  return pauli_transfer(operator_basis_images(map));
}

}  // namespace qcarrier
