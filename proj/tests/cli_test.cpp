// Drives the qdecim executable as a subprocess.

#include "qdecim/qdecim.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace qdecim;
namespace fs = std::filesystem;

namespace {

struct Result {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "qdecim_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result run(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string(QDECIM_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST(Cli, FitWritesModelAndImportanceTable) {
    ASSERT_EQ(run("generate --dimension 16 --count 3 --seed 5 --out " + path("fit_in.json")).exit_code, 0);
    const Result r = run("fit " + path("fit_in.json") + " " + path("fit_model.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("M = 3"), std::string::npos);
    EXPECT_NE(r.out.find("D = 16"), std::string::npos);
    EXPECT_NE(r.out.find("rank = 3"), std::string::npos);
    EXPECT_NE(r.out.find("k,singular_value,importance"), std::string::npos);
    EXPECT_TRUE(fs::exists(path("fit_model.json")));
}

TEST(Cli, FitRoundTripReconstructsInput) {
    ASSERT_EQ(run("generate --dimension 32 --count 6 --seed 9 --out " + path("rt_in.json")).exit_code, 0);
    ASSERT_EQ(run("fit " + path("rt_in.json") + " " + path("rt_model.json")).exit_code, 0);
    const StateSet s = io::load_state_set(path("rt_in.json"));
    const PcaModel m = io::load_model(path("rt_model.json"));
    EXPECT_LE((m.basis() * m.weights() - s.matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Cli, RegimeViolationExitsTwo) {
    io::write_state_set_file(path("regime.json"), ComplexMatrix::Identity(3, 3));
    const Result r = run("fit " + path("regime.json") + " " + path("regime_model.json"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("RegimeViolation"), std::string::npos);
}

TEST(Cli, NormalizationPolicy) {
    ComplexMatrix c = ComplexMatrix::Zero(6, 1);
    c(0, 0) = 1.0;
    c(1, 0) = 1.0;
    io::write_state_set_file(path("unnorm.json"), c);
    const Result strict = run("fit " + path("unnorm.json") + " " + path("unnorm_model.json"));
    EXPECT_EQ(strict.exit_code, 2);
    EXPECT_NE(strict.err.find("NotNormalized"), std::string::npos);
    const Result autonorm =
        run("fit --auto-normalize " + path("unnorm.json") + " " + path("unnorm_model.json"));
    EXPECT_EQ(autonorm.exit_code, 0) << autonorm.err;
    EXPECT_NE(autonorm.err.find("rescaled"), std::string::npos);
}

TEST(Cli, IoAndMalformedInput) {
    EXPECT_EQ(run("fit " + path("missing.json") + " " + path("x.json")).exit_code, 1);
    std::ofstream(path("garbage.json")) << "{not json";
    EXPECT_EQ(run("fit " + path("garbage.json") + " " + path("x.json")).exit_code, 2);
    EXPECT_EQ(run("no-such-command").exit_code, 2);
    EXPECT_EQ(run("fit").exit_code, 2);
}

TEST(Cli, DecimateFullDimensionKeepsWeights) {
    ASSERT_EQ(run("generate --dimension 20 --count 4 --seed 3 --out " + path("dec_in.json")).exit_code, 0);
    ASSERT_EQ(run("fit " + path("dec_in.json") + " " + path("dec_model.json")).exit_code, 0);
    const Result r = run("decimate " + path("dec_model.json") + " --d 5 --out " + path("dec_out.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const PcaModel m = io::load_model(path("dec_model.json"));
    const io::StateSetData coarse = io::read_state_set_file(path("dec_out.json"));
    EXPECT_LE((coarse.matrix - m.weights()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Cli, DecimateEpsSelection) {
    ASSERT_EQ(run("generate --dimension 40 --count 8 --seed 4 --out " + path("eps_in.json")).exit_code, 0);
    ASSERT_EQ(run("fit " + path("eps_in.json") + " " + path("eps_model.json")).exit_code, 0);
    const PcaModel m = io::load_model(path("eps_model.json"));

    ASSERT_EQ(run("decimate " + path("eps_model.json") + " --eps 0 --out " + path("eps0.json")).exit_code, 0);
    EXPECT_EQ(io::read_state_set_file(path("eps0.json")).matrix.rows(), 9);

    const Result r = run("decimate " + path("eps_model.json") + " --eps 0.01 --out " + path("eps1.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Index expected = select_dimension(m, 0.01, DimensionRule::SetMax);
    EXPECT_EQ(io::read_state_set_file(path("eps1.json")).matrix.rows(), expected);
    EXPECT_NE(r.out.find("d = " + std::to_string(expected)), std::string::npos);

    EXPECT_EQ(run("decimate " + path("eps_model.json") + " --d 1 --out " + path("bad.json")).exit_code, 2);
    EXPECT_EQ(run("decimate " + path("eps_model.json") + " --out " + path("bad.json")).exit_code, 2);
}

TEST(Cli, EntropyCurve) {
    ASSERT_EQ(run("generate --dimension 32 --count 6 --seed 2 --out " + path("ent_in.json")).exit_code, 0);
    const Result r = run("entropy-curve " + path("ent_in.json") + " --state 2 --qubit 3 --out " +
                      path("ent.csv"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("d95 = "), std::string::npos);
    const auto rows = io::parse_curve(slurp(path("ent.csv")));
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows.front().d, 1);
    EXPECT_EQ(rows.back().d, 7);

    const Result fine = run("entropy-curve " + path("ent_in.json") + " --state 2 --qubit 3 --fine");
    ASSERT_EQ(fine.exit_code, 0);
    const double fine_value = std::stod(fine.out.substr(fine.out.find('=') + 1));
    EXPECT_NEAR(rows.back().value, fine_value, 1e-8);

    const Result bits = run("entropy-curve " + path("ent_in.json") + " --state 2 --qubit 3 --bits --fine");
    EXPECT_NEAR(std::stod(bits.out.substr(bits.out.find('=') + 1)), fine_value / std::log(2.0), 1e-12);
}

TEST(Cli, EntropyCurveUniformStatesAndErrors) {
    ComplexMatrix c = ComplexMatrix::Constant(16, 2, 0.25);
    io::write_state_set_file(path("uni.json"), c);
    ASSERT_EQ(run("entropy-curve " + path("uni.json") + " --state 1 --qubit 1 --out " + path("uni.csv")).exit_code, 0);
    for (const auto& row : io::parse_curve(slurp(path("uni.csv")))) EXPECT_NEAR(row.value, 0.0, 1e-12);

    ASSERT_EQ(run("generate --dimension 12 --count 3 --out " + path("np2.json")).exit_code, 0);
    const Result r = run("entropy-curve " + path("np2.json") + " --out " + path("np2.csv"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("NotPowerOfTwo"), std::string::npos);
}

TEST(Cli, EvolveZeroHamiltonian) {
    const Result r = run("evolve --hamiltonian zero --dimension 16 --psi0 basis:2 --dt 0.1 --steps 5 "
                      "--d 3 --out-prefix " + path("zero"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const io::StateSetData traj = io::read_state_set_file(path("zero.trajectory.json"));
    ASSERT_EQ(traj.matrix.cols(), 5);
    for (Index j = 1; j < 5; ++j) EXPECT_TRUE(traj.matrix.col(j) == traj.matrix.col(0));
    EXPECT_TRUE(fs::exists(path("zero.model.json")));
    EXPECT_TRUE(fs::exists(path("zero.hcg.json")));
    EXPECT_TRUE(fs::exists(path("zero.retained.csv")));
}

TEST(Cli, EvolveIsingIsUnitaryAndBeatsRandom) {
    const Result ising = run("evolve --hamiltonian ising:6,1,1 --dt 0.05 --steps 20 --d 5 --out-prefix " +
                          path("ising"));
    ASSERT_EQ(ising.exit_code, 0) << ising.err;
    const StateSet traj = io::load_state_set(path("ising.trajectory.json"));
    for (Index j = 0; j < traj.count(); ++j) EXPECT_NEAR(traj.column(j).norm(), 1.0, 1e-9);
    const ComplexMatrix hcg = io::parse_matrix(slurp(path("ising.hcg.json")));
    EXPECT_EQ(hcg.rows(), 5);

    const Result random = run("evolve --hamiltonian random:11 --dimension 64 --dt 0.05 --steps 20 --d 5 "
                           "--out-prefix " + path("random"));
    ASSERT_EQ(random.exit_code, 0) << random.err;
    const auto ri = io::parse_curve(slurp(path("ising.retained.csv")));
    const auto rr = io::parse_curve(slurp(path("random.retained.csv")));
    EXPECT_GE(ri[4].value, rr[4].value);

    EXPECT_EQ(run("evolve --hamiltonian zero --dimension 8 --dt 0.1 --steps 7 --out-prefix " +
                  path("bad")).exit_code, 2);
    EXPECT_EQ(run("evolve --hamiltonian bogus --dimension 8 --dt 0.1 --steps 3 --out-prefix " +
                  path("bad")).exit_code, 2);
}

TEST(Cli, InfoAndDeterminism) {
    ASSERT_EQ(run("generate --dimension 16 --count 3 --seed 77 --out " + path("det_a.json")).exit_code, 0);
    ASSERT_EQ(run("generate --dimension 16 --count 3 --seed 77 --out " + path("det_b.json")).exit_code, 0);
    EXPECT_EQ(slurp(path("det_a.json")), slurp(path("det_b.json")));
    ASSERT_EQ(run("fit " + path("det_a.json") + " " + path("det_ma.json")).exit_code, 0);
    ASSERT_EQ(run("fit " + path("det_b.json") + " " + path("det_mb.json")).exit_code, 0);
    EXPECT_EQ(slurp(path("det_ma.json")), slurp(path("det_mb.json")));

    const Result states = run("info " + path("det_a.json"));
    EXPECT_EQ(states.exit_code, 0);
    EXPECT_NE(states.out.find("state set"), std::string::npos);
    EXPECT_NE(states.out.find("power_of_two = yes"), std::string::npos);
    const Result model = run("info " + path("det_ma.json"));
    EXPECT_EQ(model.exit_code, 0);
    EXPECT_NE(model.out.find("rank = 3"), std::string::npos);
}
