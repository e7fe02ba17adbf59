#pragma once

// Iterative qubit coupled-cluster loop: rank, select, optimize, dress, prune,
// correct, repeat.

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iqcc/integrals.hpp"
#include "iqcc/jordan_wigner.hpp"
#include "iqcc/optimizer.hpp"
#include "iqcc/pauli_sum.hpp"
#include "iqcc/qcc.hpp"

namespace iqcc {

inline constexpr double kHartreeToEv = 27.211386245988;

struct IqccConfig {
  int generators_per_iteration = 8;
  int max_iterations = 100;
  double energy_convergence = 1e-5;  // Hartree, on the energy without PT
  double prune_threshold = 1e-10;    // Hartree, after each iteration's dressing
  SpinPenalty penalty{};
  bool enable_pt = true;
  ImportanceMeasure importance = ImportanceMeasure::Amplitude;
  /// Rank generators against the penalized operator being minimized; when
  /// false a bare copy is dressed alongside and used for ranking and PT.
  bool rank_penalized = true;
  /// Generators with omega at or below this carry no first-order energy and
  /// are not selected.
  double omega_floor = 1e-12;
  /// Abort once a dressed Hamiltonian holds more terms than this.
  std::size_t max_terms = 50'000'000;
  OptimizationConfig optimizer{};

  /// Throws InvalidArgumentError on out-of-range fields.
  void validate() const;
};

struct IterationRecord {
  int index = 0;
  double energy = 0.0;          // Hartree
  double pt_correction = 0.0;   // Hartree, <= 0
  double energy_with_pt = 0.0;  // Hartree
  std::vector<RankedGenerator> selected;  // ranking data of the Ansatz generators
  std::vector<double> amplitudes;         // optimized, same order as selected
  int evaluations = 0;
  bool optimizer_converged = false;
  std::size_t terms_before_prune = 0;
  std::size_t term_count = 0;  // carried to the next iteration
  double dropped_weight = 0.0;
  std::chrono::duration<double> wall_time{};

  Ansatz ansatz() const;
};

enum class RunStatus {
  Converged,          // |E_i - E_{i-1}| <= energy_convergence
  NoGenerators,       // nothing left with omega above the floor
  IterationLimit,
  CapacityExceeded,   // dressed Hamiltonian above max_terms
  OptimizerFailure,   // non-finite energy during optimization
};

std::string to_string(RunStatus status);

struct IqccResult {
  ReferenceState reference;
  double initial_energy = 0.0;
  double initial_pt_correction = 0.0;
  std::size_t initial_term_count = 0;
  std::vector<IterationRecord> iterations;
  RunStatus status = RunStatus::IterationLimit;
  std::string message;

  double final_energy() const noexcept;
  double final_energy_with_pt() const noexcept;
  std::vector<Ansatz> ansatz_history() const;
};

/// Sum of the exact single-generator lowerings delta_e over generators with
/// omega > 0; every summand is <= 0.
double pt_correction(std::span<const RankedGenerator> remainder);

/// Runs the loop from h0 with the reference held fixed. The penalty, when
/// mu > 0, is added before the first iteration. Failures after the start
/// end the run with a status and partial trajectory instead of throwing.
IqccResult run_iqcc(const PauliSum& h0, const ReferenceState& ref, const IqccConfig& cfg);

/// One electronic state of a gap calculation.
struct StateProblem {
  PauliSum hamiltonian;
  ReferenceState reference;
  SpinPenalty penalty;
};

struct GapResult {
  IqccResult singlet;
  IqccResult triplet;
  double e_singlet = 0.0;
  double e_triplet = 0.0;
  double e_singlet_pt = 0.0;
  double e_triplet_pt = 0.0;
  double gap_ev = 0.0;
  double gap_ev_pt = 0.0;
};

/// Runs both problems concurrently; cfg.penalty is replaced by each
/// problem's own penalty.
GapResult singlet_triplet_gap(const StateProblem& singlet, const StateProblem& triplet, const IqccConfig& cfg);

/// Full pipeline from integrals: CAS selection, mapping, then a singlet run
/// (M_s = 0, s = 0) and a triplet run (M_s = 1, s = 1) with penalty
/// strength cfg.penalty.mu.
GapResult singlet_triplet_gap(const MolecularIntegrals& mi, const CASWindow& window, const IqccConfig& cfg);

struct ResourceEstimate {
  std::int64_t cnot_count = 0;
  std::int64_t rz_count = 0;
};

/// exp(-i t P / 2) for a weight-w word costs a CNOT ladder of 2(w - 1) gates
/// around one RZ; totals over every entangler of every Ansatz.
ResourceEstimate resource_estimate(std::span<const Ansatz> ansatz_history);

}  // namespace iqcc
