#pragma once

#include <bit>

#include "iqcc/pauli_word.hpp"

namespace iqcc {

/// Fixed qubit product state. Bit j set means qubit j is spin-down, i.e. the
/// spin-orbital is occupied and z_j acts as -1.
class ReferenceState {
 public:
  using Mask = PauliWord::Mask;

  ReferenceState() = default;
  /// Throws DimensionError when occupation has bits at or above n_qubits.
  ReferenceState(int n_qubits, Mask occupation);

  int n_qubits() const noexcept { return n_; }
  Mask occupation() const noexcept { return occ_; }
  int n_electrons() const noexcept { return std::popcount(occ_); }
  bool occupied(int qubit) const noexcept { return (occ_ >> qubit) & 1U; }

  /// <0|P|0> for a z-only word: (-1)^(number of occupied qubits in its support).
  double z_sign(Mask z_mask) const noexcept {
    return (std::popcount(z_mask & occ_) & 1) ? -1.0 : 1.0;
  }

  friend bool operator==(const ReferenceState&, const ReferenceState&) = default;

 private:
  int n_ = 0;
  Mask occ_ = 0;
};

}  // namespace iqcc
