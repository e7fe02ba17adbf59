#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "iqcc/errors.hpp"
#include "iqcc/report.hpp"
#include "test_support.hpp"

namespace iqcc {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "iqcc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return testing::fixture(name).string(); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("iqcc_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
    return path(name);
  }

  static Json read_json(const std::string& file) {
    std::ifstream in(file);
    return Json::parse(in);
  }

  fs::path dir_;
};

TEST_F(CliTest, TransformH2) {
  const auto r = invoke({"transform", fixture("h2.fcidump"), "-o", path("h2.json")});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  const auto doc = read_json(path("h2.json"));
  EXPECT_EQ(doc["n_qubits"], 4);
  EXPECT_EQ(doc["terms"].size(), 15u);
  EXPECT_EQ(doc["metadata"]["n_electrons"], 2);
  EXPECT_EQ(doc["metadata"]["ms2"], 0);
  EXPECT_EQ(doc["metadata"]["source"]["sha256"].get<std::string>().size(), 64u);
  const auto h = pauli_sum_from_json(doc);
  EXPECT_EQ(h, jordan_wigner(read_fcidump(fixture("h2.fcidump"))));
}

TEST_F(CliTest, TransformMissingFile) {
  const auto r = invoke({"transform", path("absent.fcidump")});
  EXPECT_EQ(r.code, cli::kExitDomainError);
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, TransformLiHWindow) {
  const auto r = invoke({"transform", fixture("lih.fcidump"), "--active-occ", "1", "--active-virt", "1"});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["n_qubits"], 4);
  EXPECT_EQ(doc["metadata"]["n_electrons"], 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsageError);
  EXPECT_EQ(invoke({"run"}).code, cli::kExitUsageError);
  EXPECT_EQ(invoke({"run", fixture("h2.fcidump"), "--bogus"}).code, cli::kExitUsageError);
  EXPECT_EQ(invoke({"run", fixture("h2.fcidump"), "--importance", "neither"}).code, cli::kExitUsageError);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitSuccess);
}

TEST_F(CliTest, RunH2Defaults) {
  const auto r = invoke({"run", fixture("h2.fcidump"), "-o", path("run.json"), "--trajectory", path("run.csv")});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  const auto doc = read_json(path("run.json"));
  const auto& result = doc["result"];
  EXPECT_NEAR(result["final_energy"].get<double>(), testing::reference_energies()["h2"]["e_fci"].get<double>(), 1e-6);
  EXPECT_EQ(doc["manifest"]["options"]["config"]["generators_per_iteration"], 8);
  EXPECT_EQ(doc["manifest"]["input"]["sha256"].get<std::string>().size(), 64u);
  EXPECT_TRUE(doc["timing"].contains("started"));

  std::ifstream csv(path("run.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "iteration,energy,energy_with_pt,term_count,dropped_weight");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 1 + static_cast<int>(result["iterations"].size()));
}

TEST_F(CliTest, RunFromHamiltonianJson) {
  ASSERT_EQ(invoke({"transform", fixture("h2.fcidump"), "-o", path("h2.json")}).code, 0);
  const auto r = invoke({"run", path("h2.json")});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_NEAR(doc["result"]["final_energy"].get<double>(), testing::reference_energies()["h2"]["e_fci"].get<double>(), 1e-6);

  Json bare = read_json(path("h2.json"));
  bare.erase("metadata");
  std::ofstream(path("bare.json")) << bare.dump();
  EXPECT_EQ(invoke({"run", path("bare.json")}).code, cli::kExitDomainError);
  EXPECT_EQ(invoke({"run", path("bare.json"), "--electrons", "2"}).code, cli::kExitSuccess);
}

TEST_F(CliTest, RunMaxIterationsZero) {
  const auto r = invoke({"run", fixture("h2.fcidump"), "--max-iterations", "0"});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_TRUE(doc["result"]["iterations"].empty());
  EXPECT_NEAR(doc["result"]["initial_energy"].get<double>(), testing::reference_energies()["h2"]["e_rhf"].get<double>(), 1e-10);
}

TEST_F(CliTest, RunCapacityAbort) {
  const auto r = invoke({"run", fixture("h4_chain.fcidump"), "--max-terms", "100", "-o", path("cap.json")});
  EXPECT_EQ(r.code, cli::kExitDomainError);
  EXPECT_NE(r.code, cli::kExitUsageError);
  EXPECT_EQ(read_json(path("cap.json"))["result"]["status"], "capacity_exceeded");
}

TEST_F(CliTest, ConfigFileAndOverride) {
  const auto config = write("iqcc.toml", "[run]\nmax-iterations = 0\nmu = 0.5\n");
  auto r = invoke({"run", fixture("h2.fcidump"), "--config", config});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  auto doc = Json::parse(r.out);
  EXPECT_TRUE(doc["result"]["iterations"].empty());
  EXPECT_EQ(doc["manifest"]["options"]["config"]["penalty_mu"], 0.5);
  EXPECT_EQ(doc["manifest"]["options"]["config_file"]["path"], config);

  r = invoke({"run", fixture("h2.fcidump"), "--config", config, "--max-iterations", "3"});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  doc = Json::parse(r.out);
  EXPECT_FALSE(doc["result"]["iterations"].empty());
  EXPECT_EQ(doc["manifest"]["options"]["config"]["max_iterations"], 3);
}

TEST_F(CliTest, RunIsDeterministic) {
  const auto a = Json::parse(invoke({"run", fixture("h4_chain.fcidump")}).out);
  const auto b = Json::parse(invoke({"run", fixture("h4_chain.fcidump")}).out);
  EXPECT_EQ(a["manifest"].dump(), b["manifest"].dump());
  EXPECT_EQ(a["result"].dump(), b["result"].dump());
}

TEST_F(CliTest, GapH2) {
  const auto r = invoke({"gap", fixture("h2.fcidump"), "--mu", "0.25"});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  const auto doc = Json::parse(r.out);
  const auto refs = testing::reference_energies()["h2"];
  const double expected = refs["e_triplet"].get<double>() - refs["e_singlet"].get<double>();
  EXPECT_NEAR(doc["result"]["gap_ev"].get<double>() / kHartreeToEv, expected, 2e-5);
  EXPECT_EQ(invoke({"gap", fixture("h2.fcidump"), "--mu", "-0.1"}).code, cli::kExitDomainError);
}

TEST_F(CliTest, GapDegenerateOrbitals) {
  // Two degenerate orbitals without electron repulsion: singlet and triplet coincide.
  const auto file = write("degenerate.fcidump", " &FCI NORB=2,NELEC=2,MS2=0,\n &END\n -1.0 1 1 0 0\n -1.0 2 2 0 0\n 0.0 0 0 0 0\n");
  const auto r = invoke({"gap", file});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["result"]["gap_ev"].get<double>(), 0.0, 1e-12);
}

TEST_F(CliTest, OracleCommand) {
  write("identity.json", R"({"n_qubits": 3, "terms": [{"word": "I", "coeff": -1.25}]})");
  auto r = invoke({"oracle", path("identity.json")});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  EXPECT_DOUBLE_EQ(Json::parse(r.out)["energy"].get<double>(), -1.25);

  ASSERT_EQ(invoke({"transform", fixture("h2.fcidump"), "-o", path("h2.json")}).code, 0);
  r = invoke({"oracle", path("h2.json"), "--electrons", "2"});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["energy"].get<double>(), testing::reference_energies()["h2"]["e_fci"].get<double>(), 1e-10);

  write("big.json", R"({"n_qubits": 20, "terms": [{"word": "Z19", "coeff": 1.0}]})");
  r = invoke({"oracle", path("big.json")});
  EXPECT_EQ(r.code, cli::kExitDomainError);
  EXPECT_NE(r.err.find("at most"), std::string::npos);

  write("broken.json", R"({"n_qubits": 2, "terms": [{"word": "Q0", "coeff": 1.0}]})");
  EXPECT_EQ(invoke({"oracle", path("broken.json")}).code, cli::kExitDomainError);
}

TEST_F(CliTest, EstimateCommand) {
  Json report = {{"n_qubits", 64}, {"iterations", Json::array()}};
  for (int i = 0; i < 75; ++i) {
    Json ansatz = Json::array();
    for (int k = 0; k < 8; ++k) ansatz.push_back({{"word", "Y0 X1 X2 X3"}, {"amplitude", 0.01}});
    report["iterations"].push_back({{"ansatz", ansatz}});
  }
  std::ofstream(path("600.json")) << report.dump();
  auto r = invoke({"estimate", path("600.json")});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["cnot_count"], 3600);
  EXPECT_EQ(doc["rz_count"], 600);
  EXPECT_EQ(doc["entanglers"], 600);

  write("empty.json", R"({"n_qubits": 4, "iterations": []})");
  doc = Json::parse(invoke({"estimate", path("empty.json")}).out);
  EXPECT_EQ(doc["cnot_count"], 0);
  EXPECT_EQ(doc["rz_count"], 0);

  write("mixed.json",
        R"({"n_qubits": 8, "iterations": [{"ansatz": [{"word": "Y0 X1", "amplitude": 0.1}, {"word": "Y2", "amplitude": 0.2}]},
            {"ansatz": [{"word": "Y0 X1 X2 X3 X4", "amplitude": 0.3}]}]})");
  doc = Json::parse(invoke({"estimate", path("mixed.json")}).out);
  EXPECT_EQ(doc["cnot_count"], 2 + 0 + 8);
  EXPECT_EQ(doc["rz_count"], 3);

  // A real run report feeds straight in.
  ASSERT_EQ(invoke({"run", fixture("h2.fcidump"), "-o", path("run.json")}).code, 0);
  doc = Json::parse(invoke({"estimate", path("run.json")}).out);
  EXPECT_EQ(doc["rz_count"], doc["entanglers"]);
  EXPECT_GE(doc["rz_count"].get<int>(), 1);
}

TEST(Report, PauliSumJsonRoundTrip) {
  testing::Random rng(70);
  const auto h = rng.hermitian_sum(9, 50);
  const auto text = to_json(h).dump();
  EXPECT_EQ(pauli_sum_from_json(Json::parse(text)), h);
  EXPECT_THROW(pauli_sum_from_json(Json::parse(R"({"terms": []})")), ParseError);
}

}  // namespace
}  // namespace iqcc
