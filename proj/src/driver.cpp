#include "iqcc/driver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <unordered_set>

#include "iqcc/errors.hpp"

namespace iqcc {

namespace {

using Clock = std::chrono::steady_clock;

struct Dressed {
  PauliSum sum;
  std::size_t terms_before_prune = 0;
  double dropped_weight = 0.0;
};

/// Dresses by the Ansatz, checking the term budget after every generator,
/// then prunes.
Dressed dress_and_prune(const PauliSum& h, const Ansatz& ansatz, const IqccConfig& cfg) {
  PauliSum current = h;
  for (const auto& step : ansatz.steps) {
    current = dress(current, step.generator, step.amplitude);
    if (current.size() > cfg.max_terms) {
      throw CapacityError("dressed Hamiltonian reached " + std::to_string(current.size()) +
                          " terms, budget is " + std::to_string(cfg.max_terms));
    }
  }
  Dressed out;
  out.terms_before_prune = current.size();
  auto pruned = prune(current, cfg.prune_threshold);
  out.sum = std::move(pruned.sum);
  out.dropped_weight = pruned.dropped_weight;
  return out;
}

double pt_excluding(const Ranking& ranking, const std::unordered_set<PauliWord, PauliWordHash>& excluded) {
  std::vector<RankedGenerator> rest;
  for (const auto* list : {&ranking.selected, &ranking.remainder}) {
    for (const auto& g : *list) {
      if (!excluded.contains(g.source_x_string)) rest.push_back(g);
    }
  }
  return pt_correction(rest);
}

}  // namespace

void IqccConfig::validate() const {
  if (generators_per_iteration < 1 || generators_per_iteration > kMaxAnsatzLength) {
    throw InvalidArgumentError("generators per iteration must lie in [1, 16]");
  }
  if (max_iterations < 0) throw InvalidArgumentError("max_iterations must be non-negative");
  if (!(energy_convergence > 0.0)) throw InvalidArgumentError("energy convergence threshold must be positive");
  if (!(prune_threshold >= 0.0)) throw InvalidArgumentError("prune threshold must be non-negative");
  if (!(penalty.mu >= 0.0)) throw InvalidArgumentError("penalty strength mu must be non-negative");
  if (!(omega_floor >= 0.0)) throw InvalidArgumentError("omega floor must be non-negative");
  if (max_terms == 0) throw InvalidArgumentError("term budget must be positive");
  if (!(optimizer.gradient_tolerance > 0.0) || optimizer.max_evaluations <= 0 || optimizer.memory_depth <= 0) {
    throw InvalidArgumentError("optimizer configuration fields must be positive");
  }
}

Ansatz IterationRecord::ansatz() const {
  Ansatz a;
  for (std::size_t k = 0; k < selected.size(); ++k) a.steps.push_back({selected[k].generator, amplitudes[k]});
  return a;
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::NoGenerators: return "no_generators";
    case RunStatus::IterationLimit: return "iteration_limit";
    case RunStatus::CapacityExceeded: return "capacity_exceeded";
    case RunStatus::OptimizerFailure: return "optimizer_failure";
  }
  return "unknown";
}

double IqccResult::final_energy() const noexcept {
  return iterations.empty() ? initial_energy : iterations.back().energy;
}

double IqccResult::final_energy_with_pt() const noexcept {
  return iterations.empty() ? initial_energy + initial_pt_correction : iterations.back().energy_with_pt;
}

std::vector<Ansatz> IqccResult::ansatz_history() const {
  std::vector<Ansatz> out;
  out.reserve(iterations.size());
  for (const auto& r : iterations) out.push_back(r.ansatz());
  return out;
}

double pt_correction(std::span<const RankedGenerator> remainder) {
  double total = 0.0;
  for (const auto& g : remainder) {
    if (g.omega > 0.0) total += estimate_amplitude(g.omega_signed, g.d_value).delta_e;
  }
  return total;
}

IqccResult run_iqcc(const PauliSum& h0, const ReferenceState& ref, const IqccConfig& cfg) {
  cfg.validate();
  if (h0.n_qubits() != ref.n_qubits()) throw DimensionError("run_iqcc: Hamiltonian and reference registers differ");
  if (!h0.is_real_hermitian()) throw HermiticityError("run_iqcc needs a real Hamiltonian (even y counts)");

  const int top_l = cfg.generators_per_iteration;
  PauliSum h = penalize(h0, cfg.penalty);
  const bool separate_ranking = !cfg.rank_penalized && cfg.penalty.mu > 0.0;
  std::optional<PauliSum> bare;
  if (separate_ranking) bare = h0;
  auto rank_now = [&] { return rank_generators(separate_ranking ? *bare : h, ref, top_l, cfg.importance); };

  IqccResult result;
  result.reference = ref;
  result.initial_energy = reference_energy(h, ref);
  result.initial_term_count = h.size();
  Ranking ranking = rank_now();
  if (cfg.enable_pt) result.initial_pt_correction = pt_excluding(ranking, {});

  double previous = result.initial_energy;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const auto start = Clock::now();
    IterationRecord record;
    record.index = it;
    for (const auto& g : ranking.selected) {
      if (g.omega > cfg.omega_floor) record.selected.push_back(g);
    }
    if (record.selected.empty()) {
      result.status = RunStatus::NoGenerators;
      result.message = "no generator with omega above " + std::to_string(cfg.omega_floor);
      return result;
    }

    std::vector<PauliWord> generators;
    std::vector<double> warm;
    for (const auto& g : record.selected) {
      generators.push_back(g.generator);
      warm.push_back(g.t_estimate);
    }
    const QccObjective objective(h, generators, ref);
    std::vector<double> zeros(warm.size(), 0.0);
    const std::vector<double>& t0 = objective.energy(warm) <= previous ? warm : zeros;
    OptimizationResult opt;
    try {
      opt = minimize([&](std::span<const double> t, std::span<double> g) { return objective.energy_and_gradient(t, g); },
                     t0, cfg.optimizer);
    } catch (const NumericError& e) {
      result.status = RunStatus::OptimizerFailure;
      result.message = e.what();
      return result;
    }
    record.amplitudes = opt.t_opt;
    record.energy = opt.energy;
    record.evaluations = opt.evaluations;
    record.optimizer_converged = opt.converged;

    const Ansatz ansatz = record.ansatz();
    try {
      auto dressed = dress_and_prune(h, ansatz, cfg);
      record.terms_before_prune = dressed.terms_before_prune;
      record.dropped_weight = dressed.dropped_weight;
      h = std::move(dressed.sum);
      if (separate_ranking) bare = dress_and_prune(*bare, ansatz, cfg).sum;
    } catch (const CapacityError& e) {
      result.status = RunStatus::CapacityExceeded;
      result.message = e.what();
      return result;
    }
    record.term_count = h.size();

    ranking = rank_now();
    if (cfg.enable_pt) {
      std::unordered_set<PauliWord, PauliWordHash> used;
      for (const auto& g : record.selected) used.insert(g.source_x_string);
      record.pt_correction = pt_excluding(ranking, used);
    }
    record.energy_with_pt = record.energy + record.pt_correction;
    record.wall_time = Clock::now() - start;
    result.iterations.push_back(std::move(record));

    const double energy = result.iterations.back().energy;
    if (std::abs(energy - previous) <= cfg.energy_convergence) {
      result.status = RunStatus::Converged;
      return result;
    }
    previous = energy;
  }
  result.status = RunStatus::IterationLimit;
  return result;
}

GapResult singlet_triplet_gap(const StateProblem& singlet, const StateProblem& triplet, const IqccConfig& cfg) {
  auto config_for = [&](const StateProblem& p) {
    IqccConfig c = cfg;
    c.penalty = p.penalty;
    return c;
  };
  const IqccConfig singlet_cfg = config_for(singlet);
  const IqccConfig triplet_cfg = config_for(triplet);
  singlet_cfg.validate();
  triplet_cfg.validate();
  auto triplet_run = std::async(std::launch::async, [&] { return run_iqcc(triplet.hamiltonian, triplet.reference, triplet_cfg); });
  GapResult out;
  out.singlet = run_iqcc(singlet.hamiltonian, singlet.reference, singlet_cfg);
  out.triplet = triplet_run.get();
  out.e_singlet = out.singlet.final_energy();
  out.e_triplet = out.triplet.final_energy();
  out.e_singlet_pt = out.singlet.final_energy_with_pt();
  out.e_triplet_pt = out.triplet.final_energy_with_pt();
  out.gap_ev = (out.e_triplet - out.e_singlet) * kHartreeToEv;
  out.gap_ev_pt = (out.e_triplet_pt - out.e_singlet_pt) * kHartreeToEv;
  return out;
}

GapResult singlet_triplet_gap(const MolecularIntegrals& mi, const CASWindow& window, const IqccConfig& cfg) {
  const auto active = select_cas(mi, window);
  const auto h = jordan_wigner(active);
  const int n_qubits = h.n_qubits();
  const StateProblem singlet{h, reference_state_for_spin(active.n_electrons, 0, n_qubits), {cfg.penalty.mu, 0.0}};
  const StateProblem triplet{h, reference_state_for_spin(active.n_electrons, 2, n_qubits), {cfg.penalty.mu, 1.0}};
  return singlet_triplet_gap(singlet, triplet, cfg);
}

ResourceEstimate resource_estimate(std::span<const Ansatz> ansatz_history) {
  ResourceEstimate out;
  for (const auto& ansatz : ansatz_history) {
    for (const auto& step : ansatz.steps) {
      const int w = step.generator.weight();
      if (w == 0) continue;  // global phase
      out.cnot_count += 2 * (w - 1);
      out.rz_count += 1;
    }
  }
  return out;
}

}  // namespace iqcc
