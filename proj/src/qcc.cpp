#include "iqcc/qcc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "iqcc/errors.hpp"
#include "iqcc/parallel.hpp"

namespace iqcc {

namespace {

void check_generator(const PauliWord& t) {
  if (t.y_count() % 2 == 0) {
    throw InvalidGeneratorError("generator " + t.to_string() + " is not purely imaginary (even y count)");
  }
}

double importance_of(const RankedGenerator& g, ImportanceMeasure measure) {
  return measure == ImportanceMeasure::Amplitude ? std::abs(g.t_estimate) : g.omega;
}

/// Diagonal part of h as (z mask, coefficient) pairs.
std::vector<std::pair<std::uint64_t, double>> diagonal_terms(const PauliSum& i0) {
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(i0.size());
  for (const auto& t : i0.terms()) out.emplace_back(t.word.z_mask(), t.coeff);
  return out;
}

/// <b|i0|b> - <0|i0|0> for b = ref ^ flip, using -2 * (anticommuting part).
double d_from_diagonal(const std::vector<std::pair<std::uint64_t, double>>& diag, std::uint64_t flip,
                       const ReferenceState& ref) {
  double acc = 0.0;
  for (const auto& [z, c] : diag) {
    if (std::popcount(z & flip) & 1) acc += c * ref.z_sign(z);
  }
  return -2.0 * acc;
}

bool contains(const std::vector<std::uint64_t>& sorted, std::uint64_t value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

std::vector<PauliTerm> merge(std::unordered_map<PauliWord, double, PauliWordHash>& acc,
                             const std::vector<PauliWord>& order) {
  std::vector<PauliTerm> out;
  out.reserve(order.size());
  for (const auto& w : order) {
    const double c = acc[w];
    if (c != 0.0) out.push_back({w, c});
  }
  return out;
}

/// Conjugates terms by T at amplitude t, keeping first-seen word order so
/// the evaluation is deterministic.
std::vector<PauliTerm> conjugate(const std::vector<PauliTerm>& terms, const PauliWord& t_gen, double t,
                                 const std::vector<std::uint64_t>& keep) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  std::unordered_map<PauliWord, double, PauliWordHash> acc;
  acc.reserve(terms.size() * 2);
  std::vector<PauliWord> order;
  order.reserve(terms.size() * 2);
  auto emit = [&](const PauliWord& w, double v) {
    if (!contains(keep, w.x_mask())) return;
    auto [it, inserted] = acc.try_emplace(w, 0.0);
    if (inserted) order.push_back(w);
    it->second += v;
  };
  for (const auto& term : terms) {
    if (commutes_unchecked(term.word, t_gen)) {
      emit(term.word, term.coeff);
      continue;
    }
    const auto product = multiply_unchecked(t_gen, term.word);
    emit(term.word, term.coeff * c);
    emit(product.word, term.coeff * s * (product.phase + Phase(1)).sign());
  }
  return merge(acc, order);
}

/// (i/2)[T, A]: each anticommuting c P becomes c i T P.
std::vector<PauliTerm> half_i_commutator(const std::vector<PauliTerm>& terms, const PauliWord& t_gen,
                                         const std::vector<std::uint64_t>& keep) {
  std::unordered_map<PauliWord, double, PauliWordHash> acc;
  std::vector<PauliWord> order;
  for (const auto& term : terms) {
    if (commutes_unchecked(term.word, t_gen)) continue;
    const auto product = multiply_unchecked(t_gen, term.word);
    if (!contains(keep, product.word.x_mask())) continue;
    auto [it, inserted] = acc.try_emplace(product.word, 0.0);
    if (inserted) order.push_back(product.word);
    it->second += term.coeff * (product.phase + Phase(1)).sign();
  }
  return merge(acc, order);
}

double diagonal_value(const std::vector<PauliTerm>& terms, const ReferenceState& ref) {
  double e = 0.0;
  for (const auto& t : terms) {
    if (t.word.is_diagonal()) e += t.coeff * ref.z_sign(t.word.z_mask());
  }
  return e;
}

}  // namespace

PauliWord derive_canonical_generator(const PauliWord& x_string) {
  if (!x_string.is_x_string()) {
    throw InvalidGeneratorError("canonical generator needs an X-string, got " + x_string.to_string());
  }
  const auto lowest = x_string.x_mask() & (~x_string.x_mask() + 1);
  return PauliWord(x_string.n_qubits(), x_string.x_mask(), lowest);
}

Omega compute_omega(const IsingDecomposition& decomposition, std::size_t block_index, const ReferenceState& ref) {
  if (block_index >= decomposition.blocks.size()) throw InvalidArgumentError("Ising block index out of range");
  const auto& block = decomposition.blocks[block_index];
  const double mean = diagonal_expectation(block.iz_factor, ref);
  // T = -i Z_j0 X_k, so <0|H T|0> = -i (-1)^{b_j0} <0|I_k|0> with b = ref ^ x.
  const auto x = block.x_string.x_mask();
  const auto lowest = x & (~x + 1);
  const bool flipped_occupied = ((ref.occupation() ^ x) & lowest) != 0;
  const double sign = flipped_occupied ? 1.0 : -1.0;  // -(-1)^{b_j0}
  return {std::abs(mean), sign * mean};
}

double compute_d(const PauliSum& h, const PauliWord& generator, const ReferenceState& ref) {
  check_generator(generator);
  if (h.n_qubits() != generator.n_qubits() || h.n_qubits() != ref.n_qubits()) {
    throw DimensionError("compute_d: register mismatch");
  }
  double acc = 0.0;
  for (const auto& t : h.terms()) {
    if (t.word.is_diagonal() && !commutes_unchecked(t.word, generator)) acc += t.coeff * ref.z_sign(t.word.z_mask());
  }
  return -2.0 * acc;
}

AmplitudeEstimate estimate_amplitude(double omega_signed, double d) {
  if (omega_signed == 0.0) return {0.0, 0.0};
  const double half = 0.5 * d;
  const double radius = std::hypot(half, omega_signed);
  // d/2 - radius without cancellation when d > 0
  const double lowering = half > 0.0 ? -(omega_signed * omega_signed) / (half + radius) : half - radius;
  return {std::atan2(-omega_signed, half), lowering};
}

Ranking rank_generators(const PauliSum& h, const ReferenceState& ref, int top_l, ImportanceMeasure measure) {
  return rank_generators(ising_decompose(h), ref, top_l, measure);
}

Ranking rank_generators(const IsingDecomposition& decomposition, const ReferenceState& ref, int top_l,
                        ImportanceMeasure measure) {
  if (top_l < 1 || top_l > kMaxAnsatzLength) {
    throw InvalidArgumentError("top_l must lie in [1, 16], got " + std::to_string(top_l));
  }
  if (decomposition.i0.n_qubits() != ref.n_qubits()) throw DimensionError("rank_generators: register mismatch");
  const auto diag = diagonal_terms(decomposition.i0);
  std::vector<RankedGenerator> all(decomposition.blocks.size());
  for_each_chunk(all.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto& block = decomposition.blocks[k];
      auto& g = all[k];
      g.source_x_string = block.x_string;
      g.generator = derive_canonical_generator(block.x_string);
      const auto om = compute_omega(decomposition, k, ref);
      g.omega = om.omega;
      g.omega_signed = om.omega_signed;
      g.d_value = d_from_diagonal(diag, block.x_string.x_mask(), ref);
      const auto est = estimate_amplitude(g.omega_signed, g.d_value);
      g.t_estimate = est.t;
      g.delta_e = est.delta_e;
      g.importance = importance_of(g, measure);
    }
  });
  std::stable_sort(all.begin(), all.end(), [](const RankedGenerator& a, const RankedGenerator& b) {
    if (a.importance != b.importance) return a.importance > b.importance;
    return WordOrder{}(a.generator, b.generator);
  });
  Ranking out;
  const auto n_selected = std::min<std::size_t>(static_cast<std::size_t>(top_l), all.size());
  out.selected.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_selected));
  out.remainder.assign(all.begin() + static_cast<std::ptrdiff_t>(n_selected), all.end());
  return out;
}

std::vector<double> Ansatz::amplitudes() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.amplitude);
  return out;
}

std::vector<PauliWord> Ansatz::generators() const {
  std::vector<PauliWord> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.generator);
  return out;
}

QccObjective::QccObjective(const PauliSum& h, std::vector<PauliWord> generators, const ReferenceState& ref)
    : generators_(std::move(generators)), ref_(ref) {
  if (generators_.size() > static_cast<std::size_t>(kMaxAnsatzLength)) {
    throw CapacityError("Ansatz length " + std::to_string(generators_.size()) + " exceeds 16");
  }
  if (h.n_qubits() != ref.n_qubits()) throw DimensionError("QccObjective: register mismatch");
  for (const auto& g : generators_) {
    if (g.n_qubits() != h.n_qubits()) throw DimensionError("QccObjective: generator register mismatch");
    check_generator(g);
  }
  const std::size_t l = generators_.size();
  reachable_.assign(l + 1, {});
  reachable_[l] = {0};
  for (std::size_t j = l; j-- > 0;) {
    auto& set = reachable_[j];
    const auto& next = reachable_[j + 1];
    set = next;
    for (const auto x : next) set.push_back(x ^ generators_[j].x_mask());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  for (const auto& t : h.terms()) {
    if (contains(reachable_[0], t.word.x_mask())) base_.push_back(t);
  }
}

double QccObjective::energy(std::span<const double> amplitudes) const { return evaluate(amplitudes, {}, false); }

double QccObjective::energy_and_gradient(std::span<const double> amplitudes, std::span<double> gradient) const {
  return evaluate(amplitudes, gradient, true);
}

double QccObjective::evaluate(std::span<const double> amplitudes, std::span<double> gradient,
                              bool with_gradient) const {
  const std::size_t l = generators_.size();
  if (amplitudes.size() != l || (with_gradient && gradient.size() != l)) {
    throw DimensionError("amplitude vector length does not match the Ansatz");
  }
  std::vector<PauliTerm> current = base_;
  // pending[j] holds (i/2)[T_j, A_j] conjugated through the generators so far
  std::vector<std::vector<PauliTerm>> pending;
  if (with_gradient) pending.reserve(l);
  for (std::size_t j = 0; j < l; ++j) {
    const auto& keep = reachable_[j + 1];
    for (auto& p : pending) p = conjugate(p, generators_[j], amplitudes[j], keep);
    const auto& before_filter = reachable_[j];
    auto dressed = conjugate(current, generators_[j], amplitudes[j], before_filter);
    if (with_gradient) pending.push_back(half_i_commutator(dressed, generators_[j], keep));
    std::erase_if(dressed, [&](const PauliTerm& t) { return !contains(keep, t.word.x_mask()); });
    current = std::move(dressed);
  }
  if (with_gradient) {
    for (std::size_t j = 0; j < l; ++j) gradient[j] = diagonal_value(pending[j], ref_);
  }
  return diagonal_value(current, ref_);
}

double qcc_energy(const PauliSum& h, const Ansatz& ansatz, const ReferenceState& ref) {
  return QccObjective(h, ansatz.generators(), ref).energy(ansatz.amplitudes());
}

std::vector<double> qcc_gradient(const PauliSum& h, const Ansatz& ansatz, const ReferenceState& ref) {
  std::vector<double> grad(ansatz.size());
  QccObjective(h, ansatz.generators(), ref).energy_and_gradient(ansatz.amplitudes(), grad);
  return grad;
}

}  // namespace iqcc
