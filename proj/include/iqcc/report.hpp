#pragma once

// JSON and CSV forms of sums, run records and reports.

#include <ostream>
#include <string>

#include <json.hpp>

#include "iqcc/driver.hpp"
#include "iqcc/pauli_sum.hpp"

namespace iqcc {

using Json = nlohmann::ordered_json;

/// {"n_qubits": N, "terms": [{"word": "X0 Z3", "coeff": -0.0123}, ...]} in
/// WordOrder; doubles are written in shortest round-trip form.
Json to_json(const PauliSum& sum);
/// Throws ParseError on a malformed document.
PauliSum pauli_sum_from_json(const Json& doc);

Json to_json(const RankedGenerator& g);
Json to_json(const IqccConfig& cfg);
Json to_json(const ResourceEstimate& r);

/// Numeric content of a run. Wall times are left out; see timing_json.
Json to_json(const IqccResult& result);
Json timing_json(const IqccResult& result);

Json to_json(const GapResult& gap);

/// Columns: iteration, energy, energy_with_pt, term_count, dropped_weight.
/// Row 0 is the reference energy.
void write_trajectory_csv(std::ostream& out, const IqccResult& result);

/// Ansatz history recovered from a run or gap report (every
/// "iterations[*].ansatz" list found, including nested state runs).
std::vector<Ansatz> ansatz_history_from_report(const Json& report);

}  // namespace iqcc
