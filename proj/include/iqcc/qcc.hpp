#pragma once

// Generators of the qubit coupled-cluster Ansatz and its energy functional.
//
// Sign conventions
//   omega_signed = Im <0|H T|0>, so the one-generator energy is
//     E(t) = E0 + omega_signed sin t + D (1 - cos t) / 2
//   and dE/dt at t = 0 equals +omega_signed.
//   The Ansatz U = exp(-i t_1 T_1/2) ... exp(-i t_L T_L/2) acts on |0> with
//   T_L first; E(t) = <0|U^dag H U|0>, so conjugation (and dressing) applies
//   T_1 first.

#include <cstdint>
#include <span>
#include <vector>

#include "iqcc/pauli_sum.hpp"

namespace iqcc {

inline constexpr int kMaxAnsatzLength = 16;

struct RankedGenerator {
  PauliWord generator;        // odd y count
  PauliWord source_x_string;  // X-string of the Ising block it came from
  double omega = 0.0;         // |omega_signed|
  double omega_signed = 0.0;
  double d_value = 0.0;
  double t_estimate = 0.0;
  double delta_e = 0.0;  // energy lowering at t_estimate, <= 0
  double importance = 0.0;
};

/// Replaces the lowest-index x with y. Throws InvalidGeneratorError unless
/// x_string is an X-string.
PauliWord derive_canonical_generator(const PauliWord& x_string);

struct Omega {
  double omega = 0.0;
  double omega_signed = 0.0;
};

/// omega = |<0|I_k|0>| for block k, with the sign of Im <0|H T_k|0> for the
/// canonical generator T_k. Throws InvalidArgumentError for a bad index.
Omega compute_omega(const IsingDecomposition& decomposition, std::size_t block_index, const ReferenceState& ref);

/// D = <0|T H T - H|0> = -2 sum over diagonal words anticommuting with T of
/// c <0|P|0>. Throws InvalidGeneratorError unless T has odd y count.
double compute_d(const PauliSum& h, const PauliWord& generator, const ReferenceState& ref);

struct AmplitudeEstimate {
  double t = 0.0;
  double delta_e = 0.0;
};

/// Global minimizer of omega_signed sin t + d (1 - cos t)/2 over (-pi, pi]:
/// t = atan2(-omega_signed, d/2), delta_e = d/2 - sqrt((d/2)^2 + omega^2).
/// omega_signed = 0 gives t = 0, delta_e = 0 (the stationary point at the
/// reference).
AmplitudeEstimate estimate_amplitude(double omega_signed, double d);

enum class ImportanceMeasure {
  Amplitude,  // |t_estimate|
  Gradient,   // |dE/dt(0)| = omega
};

struct Ranking {
  std::vector<RankedGenerator> selected;
  std::vector<RankedGenerator> remainder;
};

/// One canonical generator per Ising block, sorted by importance descending
/// with WordOrder on the generator breaking ties. The first top_l are
/// selected. Throws InvalidArgumentError unless 1 <= top_l <= 16.
Ranking rank_generators(const PauliSum& h, const ReferenceState& ref, int top_l,
                        ImportanceMeasure measure = ImportanceMeasure::Amplitude);
Ranking rank_generators(const IsingDecomposition& decomposition, const ReferenceState& ref, int top_l,
                        ImportanceMeasure measure = ImportanceMeasure::Amplitude);

/// Ordered (generator, amplitude) pairs; at most kMaxAnsatzLength.
struct Ansatz {
  std::vector<GeneratorAmplitude> steps;

  std::size_t size() const noexcept { return steps.size(); }
  std::vector<double> amplitudes() const;
  std::vector<PauliWord> generators() const;
};

/// Energy and gradient of <0|U^dag(t) H U(t)|0> for a fixed generator list.
/// Words that cannot reach the diagonal through the remaining conjugations
/// are dropped up front, which leaves the result exact.
class QccObjective {
 public:
  /// Throws CapacityError for more than 16 generators, InvalidGeneratorError
  /// for an even-y generator, DimensionError on mismatched registers.
  QccObjective(const PauliSum& h, std::vector<PauliWord> generators, const ReferenceState& ref);

  std::size_t size() const noexcept { return generators_.size(); }
  /// Terms of h kept after the reachability filter.
  std::size_t active_terms() const noexcept { return base_.size(); }

  double energy(std::span<const double> amplitudes) const;
  /// Returns the energy and writes dE/dt_j into gradient (size L).
  double energy_and_gradient(std::span<const double> amplitudes, std::span<double> gradient) const;

 private:
  double evaluate(std::span<const double> amplitudes, std::span<double> gradient, bool with_gradient) const;

  std::vector<PauliWord> generators_;
  ReferenceState ref_;
  // reachable_[j]: x masks spanned by generators j..L-1 (sorted)
  std::vector<std::vector<std::uint64_t>> reachable_;
  std::vector<PauliTerm> base_;
};

double qcc_energy(const PauliSum& h, const Ansatz& ansatz, const ReferenceState& ref);
std::vector<double> qcc_gradient(const PauliSum& h, const Ansatz& ansatz, const ReferenceState& ref);

}  // namespace iqcc
