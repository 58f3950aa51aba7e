#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "qmc/errors.hpp"
#include "qmc/pipeline.hpp"
#include "qmc/rounding.hpp"

using namespace qmc;

namespace {

RunConfig seeded(std::uint64_t seed, std::size_t rounds) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.rounds = rounds;
  cfg.deterministic = true;
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t count_fields(const std::string& row) { return std::count(row.begin(), row.end(), ',') + 1; }

}  // namespace

TEST(RunConfigTest, Validation) {
  RunConfig cfg;
  cfg.rounds = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = RunConfig{};
  cfg.deterministic = true;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.seed = 1;
  EXPECT_NO_THROW(cfg.validate());
  cfg.alpha0 = -1;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Pipeline, K2) {
  RunReport r = run_pipeline(generate(parse_generator_spec("complete:n=2")), seeded(1, 2000), "K2");
  EXPECT_NEAR(r.sdp_objective, 1.0, 1e-5);
  ASSERT_TRUE(r.opt.has_value());
  EXPECT_EQ(*r.opt, 1.0);
  // Every sample cuts the edge with theta = f(1): the energy is fixed.
  const double fixed = (2 + 2 * std::sin(2 * theta_map(1.0))) / 4;
  EXPECT_NEAR(r.mean_energy, fixed, 1e-9);
  EXPECT_NEAR(r.best.energy, fixed, 1e-9);
  EXPECT_GE(r.ratio_mean_sdp, 0.562);
  EXPECT_TRUE(r.energies_exact);
  EXPECT_EQ(r.selection_criterion, "statevector energy");
}

TEST(Pipeline, TriangleMeetsGuarantee) {
  RunReport r = run_pipeline(generate(parse_generator_spec("complete:n=3")), seeded(2, 2000), "K3");
  ASSERT_TRUE(r.opt.has_value());
  EXPECT_NEAR(*r.opt, 1.5, 1e-9);
  EXPECT_GE(r.mean_energy, 0.562 * r.sdp_objective - 5 * r.stderr_energy);
  EXPECT_GE(r.mean_energy, 0.562 * *r.opt - 5 * r.stderr_energy);
  EXPECT_GE(r.best.energy, r.mean_energy - 1e-12);
  EXPECT_LE(*r.ratio_best_opt, 1 + 1e-6);
  EXPECT_LE(*r.ratio_mean_opt, 1 + 1e-6);
}

TEST(Pipeline, BestSampleIsReproducibleAlone) {
  Graph g = generate(parse_generator_spec("cycle:n=5"));
  RunReport r = run_pipeline(g, seeded(3, 200), "C5");
  EXPECT_EQ(r.best.seed, derive_seed(3, r.best.index));
  SolverConfig cfg;
  VectorSolution vs = extract_vectors(solve(build_model(g), cfg), cfg);
  Assignment a = sample_assignment(vs, r.best.seed);
  EXPECT_EQ(a.bits(), r.best.z);
  EXPECT_EQ(a.basis, r.best.basis);
  EdgeParameters p = edge_parameters(vs, g);
  EXPECT_NEAR(expectation(simulate(build_circuit(a, p, g)), g), r.best.energy, 1e-9);
}

TEST(Pipeline, DeterministicReportsAreIdentical) {
  Graph g = generate(parse_generator_spec("star:d=3"));
  std::string a = run_pipeline(g, seeded(4, 300), "star").to_json(false).dump();
  std::string b = run_pipeline(g, seeded(4, 300), "star").to_json(false).dump();
  EXPECT_EQ(a, b);
  std::string c = run_pipeline(g, seeded(5, 300), "star").to_json(false).dump();
  EXPECT_NE(a, c);
}

TEST(Pipeline, ReportSchema) {
  RunReport r = run_pipeline(generate(parse_generator_spec("path:n=3")), seeded(6, 50), "P3");
  auto j = r.to_json();
  EXPECT_EQ(j["schema"], "qmc-report/1");
  EXPECT_TRUE(j.contains("timing"));
  EXPECT_FALSE(r.to_json(false).contains("timing"));
  EXPECT_EQ(j["rounding"]["master_seed"], 6u);
  EXPECT_EQ(j["best"]["z"].get<std::string>().size(), 3u);
  EXPECT_EQ(j["rounding"]["edges"].size(), 2u);
  EXPECT_TRUE(j["sdp"]["residuals"]["converged"].get<bool>());
}

TEST(Pipeline, ClosedFormModeIsFlagged) {
  RunConfig cfg = seeded(7, 200);
  cfg.energy = EnergyEvaluation::ClosedForm;
  Graph g = generate(parse_generator_spec("complete:n=3"));
  RunReport bound = run_pipeline(g, cfg, "K3");
  EXPECT_FALSE(bound.energies_exact);
  EXPECT_EQ(bound.selection_criterion, "closed-form lower bound");
  RunReport exact = run_pipeline(g, seeded(7, 200), "K3");
  EXPECT_LE(bound.mean_energy, exact.mean_energy + 1e-12);
}

TEST(Pipeline, ForcedStatevectorOverLimitIsRejected) {
  RunConfig cfg = seeded(8, 10);
  cfg.energy = EnergyEvaluation::Statevector;
  cfg.sim_limit = 4;
  EXPECT_THROW(run_pipeline(generate(parse_generator_spec("path:n=5")), cfg), InputError);
}

TEST(Pipeline, SolverFailurePropagates) {
  RunConfig cfg = seeded(9, 10);
  cfg.solver.max_iterations = 2;
  EXPECT_THROW(run_pipeline(generate(parse_generator_spec("cycle:n=5")), cfg), SolverFailure);
}

TEST(Pipeline, CertifyAttachesAudits) {
  RunConfig cfg = seeded(10, 100);
  cfg.certify = true;
  cfg.audit.cut_samples = 10000;
  cfg.audit.ratio_samples = 500;
  RunReport r = run_pipeline(generate(parse_generator_spec("path:n=3")), cfg, "P3");
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(r.certificate->passed());
  EXPECT_TRUE(r.to_json()["certificate"].contains("certificate"));
}

TEST(Bench, EmptySuiteIsHeaderOnly) {
  EXPECT_EQ(bench_csv({}, seeded(1, 10)), std::string(kBenchHeader) + "\n");
}

TEST(Bench, SmallSuite) {
  std::vector<BenchInstance> suite;
  for (const char* spec : {"complete:n=2", "complete:n=3", "path:n=3"})
    suite.push_back({spec, generate(parse_generator_spec(spec))});
  RunConfig cfg = seeded(11, 500);
  std::string csv = bench_csv(suite, cfg);
  auto rows = lines(csv);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], kBenchHeader);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_EQ(count_fields(rows[k]), count_fields(rows[0])) << rows[k];
    std::vector<std::string> fields;
    std::istringstream in(rows[k]);
    for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
    EXPECT_GE(std::stod(fields[5]), 0.562 - 0.01) << rows[k];
  }
  EXPECT_EQ(bench_csv(suite, cfg), csv);
}

TEST(Bench, FailuresBecomeRows) {
  RunConfig cfg = seeded(12, 10);
  cfg.solver.max_iterations = 2;
  std::vector<BenchInstance> suite{{"c5", generate(parse_generator_spec("cycle:n=5"))},
                                   {"k2", generate(parse_generator_spec("complete:n=2"))}};
  auto rows = lines(bench_csv(suite, cfg));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[1].find("sdp_failure"), std::string::npos);
  EXPECT_EQ(count_fields(rows[1]), count_fields(rows[0]));
}
