#pragma once

// Real-coefficient linear combinations of Pauli words.

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iqcc/pauli_word.hpp"
#include "iqcc/reference_state.hpp"

namespace iqcc {

struct PauliTerm {
  PauliWord word;
  double coeff = 0.0;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// Immutable sum of distinct canonical words with nonzero real coefficients,
/// stored in WordOrder. Coefficients are in Hartree when the sum is a
/// Hamiltonian.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {}
  /// Merges repeated words, drops exact zeros and sorts. Every word must be
  /// defined over n_qubits (DimensionError otherwise).
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  static PauliSum constant(int n_qubits, double value);

  int n_qubits() const noexcept { return n_; }
  std::span<const PauliTerm> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Coefficient of word, 0 when absent.
  double coefficient(const PauliWord& word) const;
  /// True when every word has an even number of y factors.
  bool is_real_hermitian() const noexcept;
  /// Sum of |coefficients|; bounds the spectral norm.
  double one_norm() const noexcept;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  friend class PauliSumBuilder;
  struct Sorted {};
  PauliSum(int n_qubits, std::vector<PauliTerm> sorted_unique, Sorted)
      : n_(n_qubits), terms_(std::move(sorted_unique)) {}

  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Hash-map accumulator for building sums term by term. Contributions to the
/// same word are added in insertion order.
class PauliSumBuilder {
 public:
  explicit PauliSumBuilder(int n_qubits, std::size_t expected_terms = 0);

  void add(const PauliWord& word, double coeff);
  void add(const PauliSum& sum, double scale = 1.0);
  std::size_t size() const noexcept { return acc_.size(); }

  PauliSum build() &&;

 private:
  int n_;
  std::unordered_map<PauliWord, double, PauliWordHash> acc_;
};

PauliSum sum_add(const PauliSum& a, const PauliSum& b);
PauliSum sum_scale(const PauliSum& a, double c);
PauliSum operator+(const PauliSum& a, const PauliSum& b);
PauliSum operator*(double c, const PauliSum& a);

/// Generalized Ising form: h = i0 + sum_k iz_factor_k * x_string_k, where i0
/// and every iz_factor hold only z/identity words.
struct IsingBlock {
  PauliWord x_string;
  PauliSum iz_factor;
};

struct IsingDecomposition {
  PauliSum i0;
  std::vector<IsingBlock> blocks;  // x_string ascending in WordOrder

  /// Rebuilds the source sum exactly.
  PauliSum recompose() const;
};

/// Groups words by x support. A word with y_count m is written as
/// (-1)^(m/2) * Z(z_mask) * X(x_mask), so the sign lands in the iz_factor.
/// Throws HermiticityError on an odd-y word.
IsingDecomposition ising_decompose(const PauliSum& h);

/// <0|iz|0> for a z-only sum. Throws InvalidArgumentError when a word
/// carries x or y factors, DimensionError on mismatched registers.
double diagonal_expectation(const PauliSum& iz, const ReferenceState& ref);

/// <0|h|0> for any sum: only the z-only words contribute.
double reference_energy(const PauliSum& h, const ReferenceState& ref);

struct GeneratorAmplitude {
  PauliWord generator;
  double amplitude = 0.0;
};

/// U^dag h U with U = exp(-i t T / 2). Terms commuting with T are kept; an
/// anticommuting term c*P becomes c*cos(t)*P + c*sin(t)*(i T P), and i T P is
/// a real multiple of a single word. Throws InvalidGeneratorError unless T
/// has an odd number of y factors.
PauliSum dress(const PauliSum& h, const PauliWord& generator, double amplitude);

/// Dresses by each pair in order: the first pair is the innermost conjugation,
/// so the result is U^dag h U for U = exp(-i t_1 T_1/2) ... exp(-i t_L T_L/2).
PauliSum dress_sequence(const PauliSum& h, std::span<const GeneratorAmplitude> sequence);

struct PruneResult {
  PauliSum sum;
  /// Sum of |c| over removed terms; an upper bound on the spectral-norm change.
  double dropped_weight = 0.0;
  std::size_t dropped_terms = 0;
};

/// Removes every term with |c| < threshold. Throws InvalidArgumentError on a
/// negative threshold.
PruneResult prune(const PauliSum& h, double threshold);

}  // namespace iqcc
