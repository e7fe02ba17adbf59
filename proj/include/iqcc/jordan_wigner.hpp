#pragma once

// Fermion-to-qubit mapping. Spin-orbitals are interleaved: spatial orbital p
// with alpha spin is qubit 2p, with beta spin qubit 2p + 1.

#include <complex>
#include <span>
#include <unordered_map>

#include "iqcc/integrals.hpp"
#include "iqcc/pauli_sum.hpp"
#include "iqcc/reference_state.hpp"

namespace iqcc {

/// One creation (dagger) or annihilation operator on a spin-orbital.
struct Ladder {
  int qubit = 0;
  bool dagger = false;
};

/// Accumulates products of ladder operators as a complex-coefficient Pauli
/// sum, then converts to a real PauliSum.
class FermionAccumulator {
 public:
  explicit FermionAccumulator(int n_qubits) : n_(n_qubits) {}

  /// Adds coeff * op_0 op_1 ... op_{k-1} (leftmost applied last).
  void add_product(double coeff, std::span<const Ladder> ops);
  void add_constant(double value);

  /// Drops terms with |c| <= drop_below and throws NumericError when an
  /// imaginary part exceeds imag_tolerance.
  PauliSum to_real_sum(double drop_below = 1e-14, double imag_tolerance = 1e-10) const;

 private:
  int n_;
  std::unordered_map<PauliWord, std::complex<double>, PauliWordHash> acc_;
};

/// H = E_core + sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q over
/// spin-orbitals, mapped to 2 * n_spatial qubits. Throws CapacityError for
/// n_spatial > 32.
PauliSum jordan_wigner(const MolecularIntegrals& mi);

/// First n_e qubits occupied. Throws InvalidArgumentError unless
/// 0 <= n_e <= n_qubits.
ReferenceState reference_state(int n_electrons, int n_qubits);

/// Aufbau determinant with (n_e + ms2)/2 alpha and (n_e - ms2)/2 beta
/// electrons in the lowest spatial orbitals; equals reference_state for
/// ms2 = 0 and for ms2 = 1 with odd n_e.
ReferenceState reference_state_for_spin(int n_electrons, int ms2, int n_qubits);

struct SpinOperators {
  PauliSum s_squared;
  PauliSum s_z;
};

/// S_z = sum_p (n_{p alpha} - n_{p beta}) / 2 and S^2 = S_- S_+ + S_z + S_z^2.
/// Throws InvalidArgumentError for odd n_qubits.
SpinOperators spin_operators(int n_qubits);

struct SpinPenalty {
  double mu = 0.0;  // Hartree
  double s = 0.0;   // target spin quantum number
};

/// h + mu (S^2 - s(s+1) S_z). Throws InvalidArgumentError for mu < 0.
PauliSum penalize(const PauliSum& h, const SpinPenalty& penalty);

}  // namespace iqcc
