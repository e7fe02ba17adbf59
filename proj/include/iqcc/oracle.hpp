#pragma once

// Brute-force verification backend: matrices of Pauli sums in the
// computational basis and exact low-lying eigenpairs.
//
// Basis convention shared with ReferenceState: basis index b has qubit j
// occupied (spin-down, z_j = -1) iff bit j of b is set; qubit 0 is the least
// significant bit.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "iqcc/pauli_sum.hpp"

namespace iqcc::oracle {

inline constexpr int kMaxDenseQubits = 12;
inline constexpr int kMaxQubits = 16;

using DenseOperator = Eigen::MatrixXcd;

/// <b ^ x | P | b> for a phase-free word: P|b> = amplitude * |b ^ x_mask>.
std::complex<double> apply_word(const PauliWord& word, std::uint64_t basis_state, std::uint64_t& image);

/// Full 2^N matrix; CapacityError above kMaxDenseQubits.
DenseOperator to_matrix(const PauliSum& h);
DenseOperator to_matrix(const PauliWord& word);

/// Restriction of the Fock space to fixed electron count and/or fixed
/// 2*M_s, with qubits 2p (alpha) and 2p+1 (beta) interleaved.
struct Sector {
  std::optional<int> n_electrons;
  std::optional<int> two_ms;
};

/// Basis states of the sector in ascending order.
std::vector<std::uint64_t> sector_basis(int n_qubits, const Sector& sector);

/// Matrix of h projected onto the span of basis. Requires N <= kMaxQubits.
DenseOperator matrix_in_basis(const PauliSum& h, const std::vector<std::uint64_t>& basis);

struct GroundState {
  double energy = 0.0;
  std::vector<std::uint64_t> basis;
  Eigen::VectorXcd vector;  // components over basis, unit norm
  double residual = 0.0;    // ||H v - E v||
};

/// Lowest eigenpair of h within sector. Dense for sector dimension up to
/// 1024, Lanczos above that (real sums only). Throws
/// CapacityError above kMaxQubits, NumericError when the residual exceeds
/// 1e-10.
GroundState ground_state(const PauliSum& h, const Sector& sector = {});

/// <v|op|v> for a vector expressed over basis.
double expectation(const PauliSum& op, const std::vector<std::uint64_t>& basis, const Eigen::VectorXcd& v);

struct SpinSector {
  double s = 0.0;
  double m_s = 0.0;
};

/// Lowest eigenvalue of h among eigenvectors with <S^2> within 1e-6 of
/// s(s+1) and <S_z> within 1e-6 of m_s. Degenerate eigenvalue clusters are
/// rotated to diagonalize S^2 first. s_z must be diagonal. Throws
/// EmptySectorError when no eigenvector qualifies and InvalidArgumentError
/// when h does not commute with the spin operators to 1e-10.
double spin_resolved_spectrum(const PauliSum& h, const PauliSum& s_squared, const PauliSum& s_z,
                              const SpinSector& sector, std::optional<int> n_electrons = std::nullopt);

}  // namespace iqcc::oracle
