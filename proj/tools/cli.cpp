#include "cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "iqcc/driver.hpp"
#include "iqcc/errors.hpp"
#include "iqcc/integrals.hpp"
#include "iqcc/jordan_wigner.hpp"
#include "iqcc/oracle.hpp"
#include "iqcc/parallel.hpp"
#include "iqcc/report.hpp"

#ifndef IQCC_VERSION
#define IQCC_VERSION "0.0.0"
#endif

namespace iqcc::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json input_record(const fs::path& path, const std::string& content) {
  return {{"path", path.string()}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}};
}

void emit(const Json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << text;
}

bool looks_like_json(const std::string& content) {
  const auto pos = content.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && content[pos] == '{';
}

/// Options shared by every command that reads integrals.
struct CasOptions {
  std::optional<int> active_occ;
  std::optional<int> active_virt;

  void attach(CLI::App& cmd) {
    cmd.add_option("--active-occ", active_occ, "Highest occupied spatial orbitals kept active")->check(CLI::NonNegativeNumber);
    cmd.add_option("--active-virt", active_virt, "Lowest virtual spatial orbitals kept active")->check(CLI::NonNegativeNumber);
  }

  MolecularIntegrals apply(const MolecularIntegrals& mi) const {
    if (!active_occ && !active_virt) return mi;
    const int occ = (mi.n_electrons + mi.ms2) / 2;
    const auto window = CASWindow::from_counts(mi, active_occ.value_or(occ), active_virt.value_or(mi.n_spatial - occ));
    return select_cas(mi, window);
  }

  CASWindow window(const MolecularIntegrals& mi) const {
    if (!active_occ && !active_virt) return CASWindow::full(mi);
    const int occ = (mi.n_electrons + mi.ms2) / 2;
    return CASWindow::from_counts(mi, active_occ.value_or(occ), active_virt.value_or(mi.n_spatial - occ));
  }

  Json to_json() const {
    return {{"active_occ", active_occ ? Json(*active_occ) : Json(nullptr)},
            {"active_virt", active_virt ? Json(*active_virt) : Json(nullptr)}};
  }
};

struct IqccOptions {
  IqccConfig cfg;
  std::string importance = "amplitude";
  bool no_pt = false;
  std::size_t max_terms = IqccConfig{}.max_terms;

  void attach(CLI::App& cmd) {
    cmd.add_option("-L,--generators", cfg.generators_per_iteration, "Generators per iteration (1-16)")
        ->capture_default_str();
    cmd.add_option("--max-iterations", cfg.max_iterations, "Iteration limit")->capture_default_str();
    cmd.add_option("--energy-convergence", cfg.energy_convergence, "Stop when |dE| falls to this (Hartree)")
        ->capture_default_str();
    cmd.add_option("--prune-threshold", cfg.prune_threshold, "Drop dressed terms below this magnitude")
        ->capture_default_str();
    cmd.add_option("--importance", importance, "Ranking measure")
        ->check(CLI::IsMember({"amplitude", "gradient"}))
        ->capture_default_str();
    cmd.add_flag("--no-pt", no_pt, "Skip the perturbative correction");
    cmd.add_option("--max-terms", max_terms, "Abort when a dressed Hamiltonian exceeds this many terms")
        ->capture_default_str();
    cmd.add_option("--gradient-tolerance", cfg.optimizer.gradient_tolerance, "Optimizer stopping tolerance")
        ->capture_default_str();
    cmd.add_option("--max-evaluations", cfg.optimizer.max_evaluations, "Optimizer evaluation budget")
        ->capture_default_str();
  }

  IqccConfig finish() {
    cfg.enable_pt = !no_pt;
    cfg.importance = importance == "gradient" ? ImportanceMeasure::Gradient : ImportanceMeasure::Amplitude;
    cfg.max_terms = max_terms;
    return cfg;
  }
};

struct Manifest {
  Json doc;
  std::string started;

  Manifest(std::string command, Json input, Json options) : started(utc_now()) {
    doc = {{"tool", "iqcc"},
           {"version", IQCC_VERSION},
           {"command", std::move(command)},
           {"input", std::move(input)},
           {"options", std::move(options)},
           {"deterministic", true}};
  }

  /// Timestamps and wall times live outside the numeric payload.
  Json timing(Json extra = Json::object()) const {
    Json t = {{"started", started}, {"finished", utc_now()}, {"threads", thread_count()}};
    for (auto& [k, v] : extra.items()) t[k] = v;
    return t;
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string config_path;
};

Json config_file_record(const std::string& path) {
  if (path.empty()) return nullptr;
  return input_record(path, read_file(path));
}

int finish_run(const IqccResult& result) {
  return result.status == RunStatus::CapacityExceeded || result.status == RunStatus::OptimizerFailure
             ? kExitDomainError
             : kExitSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative qubit coupled-cluster simulator"};
  app.set_version_flag("--version", IQCC_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.set_config("--config", "", "TOML/INI file mirroring the command-line flags");

  int exit_code = kExitSuccess;
  std::string output;

  // transform
  auto* transform = app.add_subcommand("transform", "FCIDUMP to qubit-Hamiltonian JSON");
  std::string transform_input;
  CasOptions transform_cas;
  transform->add_option("fcidump", transform_input, "FCIDUMP file")->required();
  transform_cas.attach(*transform);
  transform->add_option("-o,--output", output, "Output file (stdout by default)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run iQCC on an FCIDUMP or Hamiltonian JSON");
  std::string run_input;
  std::string trajectory_path;
  CasOptions run_cas;
  IqccOptions run_opts;
  std::optional<int> run_electrons;
  std::optional<int> run_ms2;
  double run_mu = 0.0;
  double run_spin = 0.0;
  run_cmd->add_option("input", run_input, "FCIDUMP or Hamiltonian JSON")->required();
  run_cas.attach(*run_cmd);
  run_opts.attach(*run_cmd);
  run_cmd->add_option("--electrons", run_electrons, "Electrons in the reference (overrides the input)");
  run_cmd->add_option("--ms2", run_ms2, "2 M_s of the reference (overrides the input)");
  run_cmd->add_option("--mu", run_mu, "Spin-penalty strength")->capture_default_str();
  run_cmd->add_option("--spin", run_spin, "Target total spin s of the penalty")->capture_default_str();
  run_cmd->add_option("-o,--output", output, "Report file (stdout by default)");
  run_cmd->add_option("--trajectory", trajectory_path, "Trajectory CSV file");

  // gap
  auto* gap_cmd = app.add_subcommand("gap", "Singlet-triplet gap from an FCIDUMP");
  std::string gap_input;
  CasOptions gap_cas;
  IqccOptions gap_opts;
  double gap_mu = 0.25;
  gap_cmd->add_option("fcidump", gap_input, "FCIDUMP file")->required();
  gap_cas.attach(*gap_cmd);
  gap_opts.attach(*gap_cmd);
  gap_cmd->add_option("--mu", gap_mu, "Spin-penalty strength")->capture_default_str();
  gap_cmd->add_option("-o,--output", output, "Report file (stdout by default)");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact ground state of a Hamiltonian JSON");
  std::string oracle_input;
  std::optional<int> oracle_electrons;
  std::optional<int> oracle_ms2;
  oracle_cmd->add_option("hamiltonian", oracle_input, "Hamiltonian JSON")->required();
  oracle_cmd->add_option("--electrons", oracle_electrons, "Restrict to this particle number");
  oracle_cmd->add_option("--ms2", oracle_ms2, "Restrict to this 2 M_s");
  oracle_cmd->add_option("-o,--output", output, "Output file (stdout by default)");

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Gate counts of the Ansatz history in a report");
  std::string estimate_input;
  estimate_cmd->add_option("report", estimate_input, "Run or gap report JSON")->required();
  estimate_cmd->add_option("-o,--output", output, "Output file (stdout by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsageError;
  }
  if (auto* opt = app.get_config_ptr(); opt && opt->count() > 0) config_path = opt->as<std::string>();

  try {
    if (*transform) {
      const std::string content = read_file(transform_input);
      const auto mi = transform_cas.apply(parse_fcidump(content));
      Json doc = to_json(jordan_wigner(mi));
      doc["metadata"] = {{"n_electrons", mi.n_electrons},
                         {"ms2", mi.ms2},
                         {"n_spatial", mi.n_spatial},
                         {"core_energy", mi.core_energy},
                         {"source", input_record(transform_input, content)},
                         {"window", transform_cas.to_json()}};
      emit(doc, output, out);
    } else if (*run_cmd) {
      IqccConfig cfg = run_opts.finish();
      cfg.penalty = {run_mu, run_spin};
      cfg.validate();
      const std::string content = read_file(run_input);
      PauliSum h;
      int n_electrons = 0;
      int ms2 = 0;
      if (looks_like_json(content)) {
        Json doc;
        try {
          doc = Json::parse(content);
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
        }
        h = pauli_sum_from_json(doc);
        if (doc.contains("metadata")) {
          n_electrons = doc["metadata"].value("n_electrons", 0);
          ms2 = doc["metadata"].value("ms2", 0);
        } else if (!run_electrons) {
          throw InvalidArgumentError("Hamiltonian JSON without metadata needs --electrons");
        }
      } else {
        const auto mi = run_cas.apply(parse_fcidump(content));
        h = jordan_wigner(mi);
        n_electrons = mi.n_electrons;
        ms2 = mi.ms2;
      }
      n_electrons = run_electrons.value_or(n_electrons);
      ms2 = run_ms2.value_or(ms2);
      const auto ref = reference_state_for_spin(n_electrons, ms2, h.n_qubits());

      Json options = {{"config", to_json(cfg)},
                      {"window", run_cas.to_json()},
                      {"n_electrons", n_electrons},
                      {"ms2", ms2},
                      {"config_file", config_file_record(config_path)}};
      Manifest manifest("run", input_record(run_input, content), std::move(options));
      const auto result = run_iqcc(h, ref, cfg);
      Json report = {{"manifest", manifest.doc}, {"result", to_json(result)}, {"timing", manifest.timing(timing_json(result))}};
      emit(report, output, out);
      if (!trajectory_path.empty()) {
        std::ofstream csv(trajectory_path);
        if (!csv) throw Error("cannot write " + trajectory_path);
        write_trajectory_csv(csv, result);
      }
      if (finish_run(result) != kExitSuccess) err << "iqcc: run stopped: " << result.message << "\n";
      exit_code = finish_run(result);
    } else if (*gap_cmd) {
      IqccConfig cfg = gap_opts.finish();
      cfg.penalty = {gap_mu, 0.0};
      cfg.validate();
      const std::string content = read_file(gap_input);
      const auto mi = parse_fcidump(content);
      const auto window = gap_cas.window(mi);
      Json options = {{"config", to_json(cfg)}, {"window", gap_cas.to_json()}, {"config_file", config_file_record(config_path)}};
      Manifest manifest("gap", input_record(gap_input, content), std::move(options));
      const auto gap = singlet_triplet_gap(mi, window, cfg);
      Json report = {{"manifest", manifest.doc},
                     {"result", to_json(gap)},
                     {"timing", manifest.timing({{"singlet", timing_json(gap.singlet)}, {"triplet", timing_json(gap.triplet)}})}};
      emit(report, output, out);
      exit_code = std::max(finish_run(gap.singlet), finish_run(gap.triplet));
      if (exit_code != kExitSuccess) err << "iqcc: gap run stopped early\n";
    } else if (*oracle_cmd) {
      const std::string content = read_file(oracle_input);
      Json doc;
      try {
        doc = Json::parse(content);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
      }
      const auto h = pauli_sum_from_json(doc);
      const oracle::Sector sector{oracle_electrons, oracle_ms2};
      const auto gs = oracle::ground_state(h, sector);
      emit({{"n_qubits", h.n_qubits()},
            {"sector",
             {{"n_electrons", oracle_electrons ? Json(*oracle_electrons) : Json(nullptr)},
              {"ms2", oracle_ms2 ? Json(*oracle_ms2) : Json(nullptr)}}},
            {"dimension", gs.basis.size()},
            {"energy", gs.energy},
            {"residual", gs.residual},
            {"input", input_record(oracle_input, content)}},
           output, out);
    } else if (*estimate_cmd) {
      const std::string content = read_file(estimate_input);
      Json doc;
      try {
        doc = Json::parse(content);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
      }
      const Json& payload = doc.contains("result") ? doc.at("result") : doc;
      const auto history = ansatz_history_from_report(payload);
      std::size_t entanglers = 0;
      for (const auto& a : history) entanglers += a.size();
      Json summary = to_json(resource_estimate(history));
      summary["entanglers"] = entanglers;
      summary["iterations"] = history.size();
      emit(summary, output, out);
    }
  } catch (const Error& e) {
    err << "iqcc: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const nlohmann::json::exception& e) {
    err << "iqcc: malformed JSON: " << e.what() << "\n";
    return kExitDomainError;
  }
  return exit_code;
}

}  // namespace iqcc::cli
