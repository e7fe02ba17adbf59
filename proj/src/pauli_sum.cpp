#include "iqcc/pauli_sum.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "iqcc/errors.hpp"
#include "iqcc/parallel.hpp"

namespace iqcc {

namespace {

void check_register(int expected, int actual, const char* what) {
  if (expected != actual) {
    throw DimensionError(std::string(what) + ": " + std::to_string(actual) + " qubits, expected " +
                         std::to_string(expected));
  }
}

}  // namespace

ReferenceState::ReferenceState(int n_qubits, Mask occupation) : n_(n_qubits), occ_(occupation) {
  PauliWord(n_qubits, 0, occupation);  // range check
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : n_(n_qubits) {
  PauliSumBuilder builder(n_qubits, terms.size());
  for (const auto& t : terms) builder.add(t.word, t.coeff);
  *this = std::move(builder).build();
}

PauliSum PauliSum::constant(int n_qubits, double value) {
  return PauliSum(n_qubits, {{PauliWord::identity(n_qubits), value}});
}

double PauliSum::coefficient(const PauliWord& word) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), word,
                                   [](const PauliTerm& t, const PauliWord& w) { return WordOrder{}(t.word, w); });
  return (it != terms_.end() && it->word == word) ? it->coeff : 0.0;
}

bool PauliSum::is_real_hermitian() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const PauliTerm& t) { return t.word.y_count() % 2 == 0; });
}

double PauliSum::one_norm() const noexcept {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

PauliSumBuilder::PauliSumBuilder(int n_qubits, std::size_t expected_terms) : n_(n_qubits) {
  if (expected_terms > 0) acc_.reserve(expected_terms);
}

void PauliSumBuilder::add(const PauliWord& word, double coeff) {
  check_register(n_, word.n_qubits(), "PauliSumBuilder::add");
  acc_[word] += coeff;
}

void PauliSumBuilder::add(const PauliSum& sum, double scale) {
  check_register(n_, sum.n_qubits(), "PauliSumBuilder::add");
  for (const auto& t : sum.terms()) acc_[t.word] += scale * t.coeff;
}

PauliSum PauliSumBuilder::build() && {
  std::vector<PauliTerm> terms;
  terms.reserve(acc_.size());
  for (const auto& [word, coeff] : acc_) {
    if (coeff != 0.0) terms.push_back({word, coeff});
  }
  acc_.clear();
  std::sort(terms.begin(), terms.end(), [](const PauliTerm& a, const PauliTerm& b) { return WordOrder{}(a.word, b.word); });
  return PauliSum(n_, std::move(terms), PauliSum::Sorted{});
}

PauliSum sum_add(const PauliSum& a, const PauliSum& b) {
  check_register(a.n_qubits(), b.n_qubits(), "sum_add");
  PauliSumBuilder builder(a.n_qubits(), a.size() + b.size());
  builder.add(a);
  builder.add(b);
  return std::move(builder).build();
}

PauliSum sum_scale(const PauliSum& a, double c) {
  PauliSumBuilder builder(a.n_qubits(), a.size());
  builder.add(a, c);
  return std::move(builder).build();
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) { return sum_add(a, b); }
PauliSum operator*(double c, const PauliSum& a) { return sum_scale(a, c); }

PauliSum IsingDecomposition::recompose() const {
  PauliSumBuilder builder(i0.n_qubits());
  builder.add(i0);
  for (const auto& block : blocks) {
    for (const auto& t : block.iz_factor.terms()) {
      const auto product = multiply(t.word, block.x_string);
      // Z-word times X-string: product phase is i^(-y), real for even y.
      if (!product.phase.is_real()) throw HermiticityError("odd-y word during recomposition");
      builder.add(product.word, product.phase.sign() * t.coeff);
    }
  }
  return std::move(builder).build();
}

IsingDecomposition ising_decompose(const PauliSum& h) {
  const int n = h.n_qubits();
  std::vector<PauliTerm> diagonal;
  std::map<PauliWord, std::vector<PauliTerm>, WordOrder> grouped;
  for (const auto& t : h.terms()) {
    const int y = t.word.y_count();
    if (y % 2 != 0) {
      throw HermiticityError("word " + t.word.to_string() + " has an odd number of y factors");
    }
    const auto z_word = PauliWord::from_masks_unchecked(n, 0, t.word.z_mask());
    const double coeff = (y / 2) % 2 == 0 ? t.coeff : -t.coeff;
    if (t.word.x_mask() == 0) {
      diagonal.push_back({z_word, coeff});
    } else {
      grouped[PauliWord::from_masks_unchecked(n, t.word.x_mask(), 0)].push_back({z_word, coeff});
    }
  }
  IsingDecomposition out;
  out.i0 = PauliSum(n, std::move(diagonal));
  out.blocks.reserve(grouped.size());
  for (auto& [x_string, terms] : grouped) {
    out.blocks.push_back({x_string, PauliSum(n, std::move(terms))});
  }
  return out;
}

double diagonal_expectation(const PauliSum& iz, const ReferenceState& ref) {
  check_register(ref.n_qubits(), iz.n_qubits(), "diagonal_expectation");
  double e = 0.0;
  for (const auto& t : iz.terms()) {
    if (!t.word.is_diagonal()) {
      throw InvalidArgumentError("diagonal_expectation: off-diagonal word " + t.word.to_string());
    }
    e += t.coeff * ref.z_sign(t.word.z_mask());
  }
  return e;
}

double reference_energy(const PauliSum& h, const ReferenceState& ref) {
  check_register(ref.n_qubits(), h.n_qubits(), "reference_energy");
  double e = 0.0;
  for (const auto& t : h.terms()) {
    if (t.word.is_diagonal()) e += t.coeff * ref.z_sign(t.word.z_mask());
  }
  return e;
}

PauliSum dress(const PauliSum& h, const PauliWord& generator, double amplitude) {
  check_register(h.n_qubits(), generator.n_qubits(), "dress");
  if (generator.y_count() % 2 == 0) {
    throw InvalidGeneratorError("generator " + generator.to_string() + " has an even number of y factors");
  }
  if (amplitude == 0.0) return h;
  const double c = std::cos(amplitude);
  const double s = std::sin(amplitude);
  const auto terms = h.terms();

  // Each chunk emits its contributions in input order; merging chunk outputs
  // in chunk order reproduces the sequential summation exactly.
  std::vector<std::vector<PauliTerm>> emitted(chunk_count(terms.size()));
  for_each_chunk(terms.size(), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& out = emitted[chunk];
    out.reserve(2 * (end - begin));
    for (std::size_t i = begin; i < end; ++i) {
      const auto& t = terms[i];
      if (commutes_unchecked(t.word, generator)) {
        out.push_back(t);
        continue;
      }
      const auto product = multiply_unchecked(generator, t.word);
      // i * i^k is real because T P is anti-hermitian.
      const double sign = (product.phase + Phase(1)).sign();
      out.push_back({t.word, t.coeff * c});
      out.push_back({product.word, t.coeff * s * sign});
    }
  });

  std::size_t total = 0;
  for (const auto& chunk : emitted) total += chunk.size();
  PauliSumBuilder builder(h.n_qubits(), total);
  for (const auto& chunk : emitted) {
    for (const auto& t : chunk) builder.add(t.word, t.coeff);
  }
  return std::move(builder).build();
}

PauliSum dress_sequence(const PauliSum& h, std::span<const GeneratorAmplitude> sequence) {
  PauliSum current = h;
  for (const auto& step : sequence) current = dress(current, step.generator, step.amplitude);
  return current;
}

PruneResult prune(const PauliSum& h, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgumentError("prune threshold must be non-negative");
  PruneResult result;
  std::vector<PauliTerm> kept;
  kept.reserve(h.size());
  for (const auto& t : h.terms()) {
    if (std::abs(t.coeff) < threshold) {
      result.dropped_weight += std::abs(t.coeff);
      ++result.dropped_terms;
    } else {
      kept.push_back(t);
    }
  }
  result.sum = result.dropped_terms == 0 ? h : PauliSum(h.n_qubits(), std::move(kept));
  return result;
}

}  // namespace iqcc
