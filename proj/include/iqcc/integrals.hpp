#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace iqcc {

/// Chemists'-notation (ij|kl) over spatial orbitals, stored densely.
class TwoElectronIntegrals {
 public:
  TwoElectronIntegrals() = default;
  explicit TwoElectronIntegrals(int n_orbitals)
      : n_(n_orbitals), data_(static_cast<std::size_t>(n_orbitals) * n_orbitals * n_orbitals * n_orbitals, 0.0) {}

  int n_orbitals() const noexcept { return n_; }
  double operator()(int i, int j, int k, int l) const noexcept { return data_[index(i, j, k, l)]; }
  double& operator()(int i, int j, int k, int l) noexcept { return data_[index(i, j, k, l)]; }

  /// Writes value at (ij|kl) and its seven permutational images.
  void set_symmetric(int i, int j, int k, int l, double value);

 private:
  std::size_t index(int i, int j, int k, int l) const noexcept {
    const auto n = static_cast<std::size_t>(n_);
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  }

  int n_ = 0;
  std::vector<double> data_;
};

struct MolecularIntegrals {
  double core_energy = 0.0;  // Hartree
  int n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;  // 2 S_z of the target state
  Eigen::MatrixXd h1;
  TwoElectronIntegrals g2;
};

/// Parses FCIDUMP text: a namelist header (&FCI NORB=..., NELEC=..., MS2=...
/// terminated by &END or /) followed by "value i j k l" records with 1-based
/// chemists' indices. All-zero indices give the core energy, k = l = 0 a
/// one-electron integral, j = k = l = 0 an orbital energy (ignored).
/// Throws ParseError carrying the offending line number.
MolecularIntegrals parse_fcidump(std::string_view text);
MolecularIntegrals read_fcidump(const std::filesystem::path& path);

/// Partition of the spatial orbitals into frozen (doubly occupied), active
/// and discarded virtual orbitals.
struct CASWindow {
  int n_occ_active = 0;
  int n_virt_active = 0;
  std::vector<int> frozen_occupied;
  std::vector<int> active;
  std::vector<int> discarded_virtual;

  /// The n_occ_active highest occupied orbitals and n_virt_active lowest
  /// virtuals are active; lower occupied orbitals are frozen. Occupied means
  /// index below (n_electrons + ms2) / 2. Throws InvalidArgumentError when
  /// the counts do not fit.
  static CASWindow from_counts(const MolecularIntegrals& mi, int n_occ_active, int n_virt_active);
  /// Everything active.
  static CASWindow full(const MolecularIntegrals& mi);
};

/// Integrals over the active orbitals with the frozen core folded into the
/// core energy and one-electron integrals:
///   E' = E + sum_i 2 h_ii + sum_ij (2 (ii|jj) - (ij|ji))
///   h'_pq = h_pq + sum_i (2 (pq|ii) - (pi|iq))
/// for frozen i, j. An empty active space is allowed and yields a
/// zero-orbital problem whose core energy is the frozen determinant's energy.
/// Throws InvalidArgumentError when the window does not partition the
/// orbitals or freezes more electrons than exist.
MolecularIntegrals select_cas(const MolecularIntegrals& mi, const CASWindow& window);

}  // namespace iqcc
