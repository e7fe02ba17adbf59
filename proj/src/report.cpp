#include "iqcc/report.hpp"

#include <cstdio>

#include "iqcc/errors.hpp"

namespace iqcc {

namespace {

std::string importance_name(ImportanceMeasure m) {
  return m == ImportanceMeasure::Amplitude ? "amplitude" : "gradient";
}

/// %.17g keeps CSV values lossless.
std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json iteration_json(const IterationRecord& r) {
  Json ansatz = Json::array();
  for (std::size_t k = 0; k < r.selected.size(); ++k) {
    ansatz.push_back({{"word", r.selected[k].generator.to_string()}, {"amplitude", r.amplitudes[k]}});
  }
  Json ranked = Json::array();
  for (const auto& g : r.selected) ranked.push_back(to_json(g));
  return {{"index", r.index},
          {"energy", r.energy},
          {"pt_correction", r.pt_correction},
          {"energy_with_pt", r.energy_with_pt},
          {"ansatz", std::move(ansatz)},
          {"ranked_generators", std::move(ranked)},
          {"evaluations", r.evaluations},
          {"optimizer_converged", r.optimizer_converged},
          {"terms_before_prune", r.terms_before_prune},
          {"term_count", r.term_count},
          {"dropped_weight", r.dropped_weight}};
}

}  // namespace

Json to_json(const PauliSum& sum) {
  Json terms = Json::array();
  for (const auto& t : sum.terms()) terms.push_back({{"word", t.word.to_string()}, {"coeff", t.coeff}});
  return {{"n_qubits", sum.n_qubits()}, {"terms", std::move(terms)}};
}

PauliSum pauli_sum_from_json(const Json& doc) {
  try {
    const int n = doc.at("n_qubits").get<int>();
    if (n < 0 || n > kMaxQubits) throw ParseError("n_qubits outside [0, 64]", 0);
    std::vector<PauliTerm> terms;
    for (const auto& t : doc.at("terms")) {
      terms.push_back({PauliWord::parse(t.at("word").get<std::string>(), n), t.at("coeff").get<double>()});
    }
    return PauliSum(n, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed Pauli-sum JSON: ") + e.what(), 0);
  }
}

Json to_json(const RankedGenerator& g) {
  return {{"word", g.generator.to_string()},
          {"source_x_string", g.source_x_string.to_string()},
          {"omega", g.omega},
          {"omega_signed", g.omega_signed},
          {"d", g.d_value},
          {"t_estimate", g.t_estimate},
          {"delta_e", g.delta_e},
          {"importance", g.importance}};
}

Json to_json(const IqccConfig& cfg) {
  return {{"generators_per_iteration", cfg.generators_per_iteration},
          {"max_iterations", cfg.max_iterations},
          {"energy_convergence", cfg.energy_convergence},
          {"prune_threshold", cfg.prune_threshold},
          {"penalty_mu", cfg.penalty.mu},
          {"penalty_s", cfg.penalty.s},
          {"enable_pt", cfg.enable_pt},
          {"importance", importance_name(cfg.importance)},
          {"rank_penalized", cfg.rank_penalized},
          {"omega_floor", cfg.omega_floor},
          {"max_terms", cfg.max_terms},
          {"optimizer",
           {{"algorithm", "lbfgs"},
            {"gradient_tolerance", cfg.optimizer.gradient_tolerance},
            {"max_evaluations", cfg.optimizer.max_evaluations},
            {"memory_depth", cfg.optimizer.memory_depth}}}};
}

Json to_json(const ResourceEstimate& r) { return {{"cnot_count", r.cnot_count}, {"rz_count", r.rz_count}}; }

Json to_json(const IqccResult& result) {
  Json iterations = Json::array();
  for (const auto& r : result.iterations) iterations.push_back(iteration_json(r));
  const auto history = result.ansatz_history();
  return {{"status", to_string(result.status)},
          {"message", result.message},
          {"n_qubits", result.reference.n_qubits()},
          {"reference_occupation", PauliWord(result.reference.n_qubits(), 0, result.reference.occupation()).to_string()},
          {"initial_energy", result.initial_energy},
          {"initial_pt_correction", result.initial_pt_correction},
          {"initial_term_count", result.initial_term_count},
          {"final_energy", result.final_energy()},
          {"final_energy_with_pt", result.final_energy_with_pt()},
          {"pt_method", "sum of exact single-generator lowerings over non-selected generators"},
          {"resources", to_json(resource_estimate(history))},
          {"iterations", std::move(iterations)}};
}

Json timing_json(const IqccResult& result) {
  Json seconds = Json::array();
  for (const auto& r : result.iterations) seconds.push_back(r.wall_time.count());
  return {{"iteration_wall_seconds", std::move(seconds)}};
}

Json to_json(const GapResult& gap) {
  auto history = gap.singlet.ansatz_history();
  const auto triplet_history = gap.triplet.ansatz_history();
  history.insert(history.end(), triplet_history.begin(), triplet_history.end());
  return {{"hartree_to_ev", kHartreeToEv},
          {"e_singlet", gap.e_singlet},
          {"e_triplet", gap.e_triplet},
          {"e_singlet_pt", gap.e_singlet_pt},
          {"e_triplet_pt", gap.e_triplet_pt},
          {"gap_ev", gap.gap_ev},
          {"gap_ev_pt", gap.gap_ev_pt},
          {"resources", to_json(resource_estimate(history))},
          {"singlet", to_json(gap.singlet)},
          {"triplet", to_json(gap.triplet)}};
}

void write_trajectory_csv(std::ostream& out, const IqccResult& result) {
  out << "iteration,energy,energy_with_pt,term_count,dropped_weight\n";
  out << 0 << ',' << exact(result.initial_energy) << ','
      << exact(result.initial_energy + result.initial_pt_correction) << ',' << result.initial_term_count << ','
      << exact(0.0) << '\n';
  for (const auto& r : result.iterations) {
    out << r.index << ',' << exact(r.energy) << ',' << exact(r.energy_with_pt) << ',' << r.term_count << ','
        << exact(r.dropped_weight) << '\n';
  }
}

std::vector<Ansatz> ansatz_history_from_report(const Json& report) {
  std::vector<Ansatz> out;
  const int n = report.value("n_qubits", kMaxQubits);
  if (report.contains("iterations")) {
    for (const auto& it : report.at("iterations")) {
      Ansatz a;
      for (const auto& step : it.at("ansatz")) {
        a.steps.push_back({PauliWord::parse(step.at("word").get<std::string>(), n), step.value("amplitude", 0.0)});
      }
      out.push_back(std::move(a));
    }
  }
  for (const char* key : {"singlet", "triplet"}) {
    if (report.contains(key)) {
      auto nested = ansatz_history_from_report(report.at(key));
      out.insert(out.end(), nested.begin(), nested.end());
    }
  }
  return out;
}

}  // namespace iqcc
