// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_support.hpp"

namespace nmrqc {
namespace {

namespace fs = std::filesystem;

const std::string kSamples = NMRQC_SAMPLES_DIR;

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("nmrqc_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

// --- molecules -------------------------------------------------------------------

TEST(MoleculeIo, ReadsSampleFiles) {
  const auto m = read_molecule(kSamples + "/molecules/two_proton.json");
  EXPECT_EQ(m.system.size(), 2);
  EXPECT_DOUBLE_EQ(m.system.couplings().j(0, 1), 7.143);
  EXPECT_DOUBLE_EQ(m.system.spin(0).t2_s, 1.0);
  const auto chain = read_molecule(kSamples + "/molecules/linear_chain4.json");
  EXPECT_EQ(chain.system.size(), 4);
  EXPECT_FALSE(coupling_graph(chain.system).adjacent(0, 3));
}

TEST(MoleculeIo, JsonRoundTripIncludingCustomNuclei) {
  const std::string text = R"({
    "name": "custom", "field_tesla": 9.4, "temperature_k": 77,
    "nuclei": [{"species": "Si29", "gamma": -5.319e7}],
    "spins": [{"species": "H1", "offset_hz": 12.5, "t1_s": null, "t2_s": 2},
              {"species": "Si29", "offset_hz": -40}],
    "couplings": [{"i": 0, "j": 1, "j_hz": -8.25, "d_hz": 1.5}]
  })";
  const auto m = molecule_from_string(text);
  EXPECT_TRUE(std::isinf(m.system.spin(0).t1_s));
  EXPECT_EQ(m.system.spin(0).t2_s, 2.0);
  EXPECT_TRUE(std::isinf(m.system.spin(1).t1_s));
  EXPECT_DOUBLE_EQ(m.system.couplings().effective(0, 1), -5.25);
  const auto back = molecule_from_json(molecule_to_json(m));
  EXPECT_EQ(molecule_to_json(back), molecule_to_json(m));
  EXPECT_EQ(back.system.spin(1).nucleus.gamma, -5.319e7);
  EXPECT_EQ(back.temperature_k, 77.0);
}

TEST(MoleculeIo, RejectsMalformedInput) {
  const auto bad = [](const std::string& text) { EXPECT_THROW(molecule_from_string(text), ParseError) << text; };
  bad("{");
  bad("[]");
  bad(R"({"spins": [{"species": "H1"}]})");
  bad(R"({"field_tesla": 1, "spins": []})");
  bad(R"({"field_tesla": 1, "spins": [{"offset_hz": 3}]})");
  bad(R"({"field_tesla": 1, "spins": [{"species": "Xx"}]})");
  bad(R"({"field_tesla": 1, "spins": [{"species": "H1", "offset_hz": "a"}]})");
  bad(R"({"field_tesla": 1, "temperature_k": -3, "spins": [{"species": "H1"}]})");
  bad(R"({"field_tesla": 1, "spins": [{"species": "H1"}, {"species": "H1"}],
          "couplings": [{"i": 0, "j": 2, "j_hz": 3}]})");
  bad(R"({"field_tesla": 1, "spins": [{"species": "H1"}, {"species": "H1"}],
          "couplings": [{"i": 0, "j": 0.5, "j_hz": 3}]})");
  bad(R"({"field_tesla": 1, "spins": [{"species": "H1"}, {"species": "H1"}],
          "couplings": [{"i": 0, "j": 1, "j_hz": 3}, {"i": 1, "j": 0, "j_hz": 4}]})");
  EXPECT_NO_THROW(molecule_from_string(R"({"field_tesla": 1, "spins": [{"species": "H1"}, {"species": "H1"}],
          "couplings": [{"i": 0, "j": 1, "j_hz": 3}, {"i": 1, "j": 0, "j_hz": 3}]})"));
  EXPECT_THROW(read_molecule("/nonexistent/molecule.json"), IoError);
}

TEST(MoleculeIo, PhysicalViolationsAreNotParseErrors) {
  const std::string t2_too_long = R"({"field_tesla": 1, "spins": [{"species": "H1", "t1_s": 1, "t2_s": 5}]})";
  EXPECT_THROW(molecule_from_string(t2_too_long), PhysicsError);
}

// --- configuration and errors ------------------------------------------------------

TEST(Pipeline, PreparationNamesRoundTrip) {
  for (auto p : {Preparation::thermal, Preparation::pseudopure_spatial, Preparation::pseudopure_temporal,
                 Preparation::override_epsilon, Preparation::pure})
    EXPECT_EQ(parse_preparation(preparation_name(p)), p);
  EXPECT_THROW(parse_preparation("hot"), ParseError);
}

TEST(Pipeline, ExitCodesFollowErrorKind) {
  EXPECT_EQ(exit_code_for(ParseError("x")), kExitParse);
  EXPECT_EQ(exit_code_for(CompileError("x")), kExitCompile);
  EXPECT_EQ(exit_code_for(RoutingError("x")), kExitCompile);
  EXPECT_EQ(exit_code_for(PhysicsError("x")), kExitPhysics);
  EXPECT_EQ(exit_code_for(StructureError("x", 1.0)), kExitPhysics);
  EXPECT_EQ(exit_code_for(IoError("x")), kExitIo);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), 1);
}

TEST(Pipeline, StateJsonRoundTrip) {
  std::mt19937_64 rng(51);
  const auto rho = DensityMatrix::pure(testing::random_state(rng, 3));
  const auto j = nlohmann::json::parse(state_to_json(rho).dump());
  EXPECT_EQ(j.at("format"), "nmrqc-state");
  EXPECT_TRUE(j.at("product_operators").is_object());
  EXPECT_TRUE(state_from_json(j).matrix() == rho.matrix());
  EXPECT_THROW(state_from_json(nlohmann::json::object()), ParseError);
  auto broken = j;
  broken["real"].erase(0);
  EXPECT_THROW(state_from_json(broken), ParseError);
}

TEST(Pipeline, ArtifactsAreWrittenWholesale) {
  const auto dir = scratch_dir("artifacts");
  write_artifacts(dir.string(), {{"a.txt", "alpha"}, {"b.txt", "beta"}});
  EXPECT_EQ(read_text_file((dir / "a.txt").string()), "alpha");
  EXPECT_EQ(read_text_file((dir / "b.txt").string()), "beta");
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".partial");
  // A regular file where the directory should be.
  const auto blocker = scratch_dir("blocker");
  std::ofstream(blocker) << "x";
  EXPECT_THROW(write_artifacts(blocker.string(), {{"a.txt", "alpha"}}), IoError);
  fs::remove_all(dir);
  fs::remove(blocker);
}

// --- end to end --------------------------------------------------------------------------

TEST(Pipeline, DefaultRunProducesAllArtifacts) {
  RunConfig cfg;
  cfg.circuit_path = kSamples + "/circuits/bell.txt";
  const auto r = run_pipeline(cfg);
  for (const char* name : {"report.json", "state.json", "sequence.json", "fid.csv", "spectrum.csv", "peaks.json"})
    EXPECT_TRUE(r.artifacts.contains(name)) << name;
  EXPECT_TRUE(r.report.at("preparation").at("pseudo_pure").get<bool>());
  EXPECT_LT(r.report.at("spectrum").at("parseval_residual").get<double>(), 1e-12);
  EXPECT_FALSE(r.report.contains("seed"));
  // Bell state from pseudo-pure input: both qubits read as 1/2.
  EXPECT_TRUE(r.readout.normalized);
  for (const auto& q : r.readout.qubits) EXPECT_NEAR(q.analog, 0.5, 1e-9);
}

TEST(Pipeline, SeededNoisyRunsAreReproducible) {
  RunConfig cfg;
  cfg.circuit_path = kSamples + "/circuits/bell.txt";
  cfg.relaxation = true;
  cfg.noise_sigma = 1e-7;
  cfg.seed = 42;
  const auto a = run_pipeline(cfg);
  const auto b = run_pipeline(cfg);
  EXPECT_EQ(a.artifacts, b.artifacts);
  EXPECT_EQ(a.report.at("seed").get<std::uint64_t>(), 42u);
  cfg.seed = 43;
  EXPECT_NE(run_pipeline(cfg).artifacts.at("fid.csv"), a.artifacts.at("fid.csv"));
}

TEST(Pipeline, TrackedFramesGiveTheSameAnswer) {
  RunConfig cfg;
  cfg.circuit = grover2_circuit("10");
  cfg.preparation = Preparation::pure;
  const auto a = run_pipeline(cfg);
  cfg.frame = FrameMode::tracked;
  const auto b = run_pipeline(cfg);
  EXPECT_LT((a.final_state.matrix() - b.final_state.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pipeline, ErrorsSurfaceAsTypedExceptions) {
  RunConfig cfg;
  cfg.circuit_path = kSamples + "/circuits/invalid.txt";
  EXPECT_THROW(run_pipeline(cfg), ParseError);
  cfg.circuit_path = "/nonexistent/c.txt";
  EXPECT_THROW(run_pipeline(cfg), IoError);
  cfg.circuit_path.reset();
  cfg.molecule_path = kSamples + "/molecules/linear_chain4.json";
  cfg.preparation = Preparation::pseudopure_spatial;
  EXPECT_THROW(run_pipeline(cfg), PhysicsError);
}

// --- demos ---------------------------------------------------------------------------------

TEST(Demos, IdealCircuitsGiveTheExpectedAnswers) {
  for (const auto& name : demo_names())
    for (const auto& c : demo_cases(name)) {
      const Vector out = circuit_unitary(c.circuit) * Vector::Unit(4, 0);
      for (int q = 0; q < 2; ++q) {
        if (c.expected[q] == '?') continue;
        double p1 = 0.0;  // probability that qubit q is 1
        for (Eigen::Index a = 0; a < 4; ++a)
          if (a & (Eigen::Index{1} << (1 - q))) p1 += std::norm(out(a));
        EXPECT_NEAR(p1, c.expected[q] == '1' ? 1.0 : 0.0, 1e-12) << name << " " << c.variant << " q" << q;
      }
    }
  EXPECT_THROW(demo_cases("shor"), ParseError);
}

TEST(Demos, DeutschDistinguishesAllOraclesFromPseudoPureStart) {
  for (const auto& c : demo_cases("deutsch")) {
    RunConfig cfg;
    cfg.circuit = c.circuit;
    const auto r = run_pipeline(cfg);
    ASSERT_TRUE(r.readout.qubits[0].deterministic()) << c.variant;
    EXPECT_EQ(r.readout.bits()[0], c.expected[0]) << c.variant;
  }
}

TEST(Demos, GroverFindsEveryMarkedItem) {
  for (const auto prep : {Preparation::pure, Preparation::pseudopure_temporal, Preparation::pseudopure_spatial}) {
    for (const auto& c : demo_cases("grover2")) {
      RunConfig cfg;
      cfg.circuit = c.circuit;
      cfg.preparation = prep;
      const auto r = run_pipeline(cfg);
      EXPECT_EQ(r.readout.bits(), c.expected) << preparation_name(prep) << " " << c.variant;
      if (prep == Preparation::pure) {
        for (int q = 0; q < 2; ++q)
          EXPECT_NEAR(r.readout.qubits[q].analog, c.expected[q] == '1' ? 1.0 : 0.0, 1e-9) << c.variant;
      }
    }
  }
}

TEST(Demos, DemoMoleculeMatchesItsDescription) {
  const auto m = demo_molecule();
  EXPECT_EQ(m.system.size(), 2);
  EXPECT_NEAR(1.0 / (2.0 * m.system.couplings().effective(0, 1)), 0.070, 1e-4);
  EXPECT_TRUE(weak_coupling_check(m.system).all_pass());
}

}  // namespace
}  // namespace nmrqc
