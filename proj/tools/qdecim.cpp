// qdecim: command-line front end.
//
// Exit codes: 0 success, 1 I/O failure, 2 validation or domain error.

#include "qdecim/qdecim.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace qdecim;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;

struct CommonOptions {
    std::uint64_t seed = 1;
    std::optional<double> tolerance;
    bool auto_normalize = false;
    bool bits = false;

    Tolerances tolerances() const {
        Tolerances tol;
        if (tolerance) tol.normalization = *tolerance;
        return tol;
    }
    NormPolicy policy() const { return auto_normalize ? NormPolicy::AutoNormalize : NormPolicy::Strict; }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::logic_error&) {
    }
    throw Error(ErrorKind::InvalidArgument, "cannot parse " + what + " from \"" + s + "\"");
}

long long parse_integer(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw Error(ErrorKind::InvalidArgument, "cannot parse " + what + " from \"" + s + "\"");
}

void report_normalization(const StateSet& s) {
    const auto& factors = s.normalization_factors();
    for (std::size_t mu = 0; mu < factors.size(); ++mu) {
        if (factors[mu] != 1.0) {
            std::cerr << "note: state " << mu + 1 << " rescaled by " << io::format_double(factors[mu])
                      << "\n";
        }
    }
}

void print_importance_table(const PcaModel& model) {
    std::cout << "k,singular_value,importance\n";
    const bool any = model.rank() > 0;
    for (Index k = 1; k <= model.count(); ++k) {
        std::cout << k << ',' << io::format_double(model.singular_values()(k - 1)) << ','
                  << (any ? io::format_double(importance(model, k)) : std::string("nan")) << '\n';
    }
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
    Index dim = 0;
    Index count = 0;
    std::string out;
};

int cmd_generate(const GenerateArgs& a, const CommonOptions& common) {
    if (a.dim < 1 || a.count < 1) {
        throw Error(ErrorKind::InvalidArgument, "dimension and count must be positive");
    }
    const ComplexMatrix c = random_state_matrix(a.dim, a.count, common.seed);
    io::write_state_set_file(a.out, c);
    std::cout << "wrote " << a.count << " states of dimension " << a.dim << " (seed "
              << common.seed << ") to " << a.out << "\n";
    return kExitOk;
}

// --- fit --------------------------------------------------------------------

struct FitArgs {
    std::string in;
    std::string out;
};

int cmd_fit(const FitArgs& a, const CommonOptions& common) {
    const Tolerances tol = common.tolerances();
    const StateSet s = io::load_state_set(a.in, common.policy(), tol);
    report_normalization(s);
    const PcaModel model = fit_pca(s, tol);
    io::write_model_file(a.out, model);
    std::cout << "M = " << model.count() << "\nD = " << model.dim() << "\nrank = " << model.rank()
              << "\n";
    print_importance_table(model);
    return kExitOk;
}

// --- decimate ---------------------------------------------------------------

struct DecimateArgs {
    std::string model;
    std::optional<Index> d;
    std::optional<double> eps;
    std::string out;
};

int cmd_decimate(const DecimateArgs& a, const CommonOptions& common) {
    const Tolerances tol = common.tolerances();
    auto model = std::make_shared<const PcaModel>(io::load_model(a.model, tol));
    if (a.d.has_value() == a.eps.has_value()) {
        throw Error(ErrorKind::InvalidArgument, "give exactly one of --d and --eps");
    }
    const Index d = a.d ? *a.d : select_dimension(*model, *a.eps, DimensionRule::SetMax);
    const CoarseGrainMap map = build_map(model, d);

    ComplexMatrix coarse(d, model->count());
    for (Index mu = 0; mu < model->count(); ++mu) {
        const ComplexVector fine = reconstruct(*model, model->weights().col(mu));
        const CoarseState cs = decimate_state(map, fine, tol);
        coarse.col(mu) = cs.weights;
        std::cout << "state " << mu + 1 << ": d = " << d
                  << ", retained = " << io::format_double(cs.norm_before * cs.norm_before) << "\n";
    }
    io::write_state_set_file(a.out, coarse);
    return kExitOk;
}

// --- entropy-curve ----------------------------------------------------------

struct EntropyArgs {
    std::string states;
    Index state = 1;
    int qubit = 1;
    std::string out;
    bool fine = false;
};

int cmd_entropy_curve(const EntropyArgs& a, const CommonOptions& common) {
    const Tolerances tol = common.tolerances();
    const StateSet s = io::load_state_set(a.states, common.policy(), tol);
    report_normalization(s);
    const QubitFactorization f(s.dim());
    f.bit_of(a.qubit);
    if (a.state < 1 || a.state > s.count()) {
        throw Error(ErrorKind::InvalidArgument, "--state must lie in [1, M]");
    }
    const double scale = common.bits ? 1.0 / std::numbers::ln2 : 1.0;
    if (a.fine) {
        std::cout << "fine = "
                  << io::format_double(
                         qubit_entropy(s.column(a.state - 1).normalized(), f, a.qubit) * scale)
                  << "\n";
        if (a.out.empty()) return kExitOk;
    }
    if (a.out.empty()) throw Error(ErrorKind::InvalidArgument, "--out is required");

    const PcaModel model = fit_pca(s, tol);
    const EntropyCurve curve = entropy_vs_dimension_curve(s, model, a.state - 1, a.qubit, tol);
    std::vector<io::CurveRow> rows;
    rows.reserve(curve.points.size());
    for (const auto& p : curve.points) rows.push_back({p.d, p.entropy * scale});
    io::write_curve_file(a.out, rows);
    std::cout << "points = " << rows.size() << "\nd95 = " << curve.saturation_dimension() << "\n";
    return kExitOk;
}

// --- evolve -----------------------------------------------------------------

struct EvolveArgs {
    std::string hamiltonian;
    std::string psi0 = "basis:0";
    Index dimension = 0;
    double dt = 0.0;
    Index steps = 0;
    Index d = 5;
    std::string out_prefix;
};

Hamiltonian make_hamiltonian(const std::string& arg, Index dimension) {
    const auto colon = arg.find(':');
    const std::string kind = arg.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : arg.substr(colon + 1);
    auto need_dimension = [&] {
        if (dimension < 1) {
            throw Error(ErrorKind::InvalidArgument, "--dimension is required for " + kind);
        }
    };
    if (kind == "zero") {
        need_dimension();
        return zero_hamiltonian(dimension);
    }
    if (kind == "random") {
        need_dimension();
        const long long seed = parse_integer(rest, "random Hamiltonian seed");
        return random_hamiltonian(dimension, static_cast<std::uint64_t>(seed));
    }
    if (kind == "ising") {
        const auto parts = split(rest, ',');
        if (parts.size() != 3) throw Error(ErrorKind::InvalidArgument, "expected ising:n,J,g");
        const auto n = parse_integer(parts[0], "qubit count");
        if (n < 1 || n > 20) throw Error(ErrorKind::InvalidArgument, "ising needs 1 <= n <= 20");
        return ising_hamiltonian(static_cast<int>(n), parse_real(parts[1], "J"),
                                 parse_real(parts[2], "g"));
    }
    throw Error(ErrorKind::InvalidArgument, "unknown Hamiltonian \"" + arg + "\"");
}

StateVector make_initial_state(const std::string& arg, Index dim, std::uint64_t seed) {
    if (arg == "uniform") {
        return ComplexVector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    }
    if (arg == "random") return random_state(dim, seed);
    if (arg.rfind("basis:", 0) == 0) {
        const long long i = parse_integer(arg.substr(6), "basis index");
        if (i < 0 || i >= dim) throw Error(ErrorKind::InvalidArgument, "basis index out of range");
        return ComplexVector::Unit(dim, static_cast<Index>(i));
    }
    const io::StateSetData data = io::read_state_set_file(arg);
    if (data.matrix.rows() != dim) {
        throw Error(ErrorKind::DimMismatch, "initial state file has the wrong dimension");
    }
    return data.matrix.col(0);
}

int cmd_evolve(const EvolveArgs& a, const CommonOptions& common) {
    const Tolerances tol = common.tolerances();
    const Hamiltonian h = make_hamiltonian(a.hamiltonian, a.dimension);
    const StateVector psi0 = make_initial_state(a.psi0, h.dim(), common.seed);
    const Trajectory traj = evolve_sequence(h, psi0, a.dt, a.steps, tol);
    const Index d = std::min(a.d, traj.steps() + 1);
    const CoarseTrajectory coarse = coarse_grained_trajectory(traj, d, tol);
    const HermitianOperator h_cg = coarse_grain_hamiltonian(coarse.map, h);

    const std::string prefix = a.out_prefix;
    io::write_state_set_file(prefix + ".trajectory.json", traj.states.matrix());
    io::write_model_file(prefix + ".model.json", *coarse.model);
    io::write_text_atomic(prefix + ".hcg.json", io::matrix_json(h_cg.matrix()));

    const std::vector<double> retained = retained_weight_curve(*coarse.model);
    std::vector<io::CurveRow> rows;
    for (std::size_t k = 0; k < retained.size(); ++k) {
        rows.push_back({static_cast<Index>(k + 1), retained[k]});
    }
    io::write_curve_file(prefix + ".retained.csv", rows);

    std::cout << "D = " << h.dim() << "\nM = " << traj.steps() << "\nrank = "
              << coarse.model->rank() << "\nd = " << d << "\nretained(d) = "
              << io::format_double(retained[static_cast<std::size_t>(d - 1)]) << "\n";
    return kExitOk;
}

// --- info -------------------------------------------------------------------

int cmd_info(const std::string& path, const CommonOptions& common) {
    const std::string text = io::read_text(path);
    const Tolerances tol = common.tolerances();
    if (text.find("\"format_version\"") != std::string::npos &&
        text.find("\"basis\"") != std::string::npos) {
        const PcaModel model = io::parse_model(text, tol);
        std::cout << "model\nD = " << model.dim() << "\nM = " << model.count()
                  << "\nrank = " << model.rank() << "\n";
        print_importance_table(model);
        return kExitOk;
    }
    const io::StateSetData data = io::parse_state_set(text);
    std::cout << "state set\nD = " << data.matrix.rows() << "\nM = " << data.matrix.cols() << "\n";
    const Index dim = data.matrix.rows();
    const bool pow2 = dim >= 2 && (dim & (dim - 1)) == 0;
    std::cout << "power_of_two = " << (pow2 ? "yes" : "no") << "\n";
    std::cout << "regime_ok = " << (dim > data.matrix.cols() + 1 ? "yes" : "no") << "\n";
    std::cout << "state,norm\n";
    for (Index mu = 0; mu < data.matrix.cols(); ++mu) {
        std::cout << mu + 1 << ',' << io::format_double(data.matrix.col(mu).norm()) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coarse-grain sets of pure quantum states by mean-subtracted PCA"};
    app.require_subcommand(1);

    CommonOptions common;
    app.add_option("--seed", common.seed, "Seed for pseudo-random generators");
    app.add_option("--tolerance", common.tolerance, "Normalization tolerance for input states");
    app.add_flag("--auto-normalize", common.auto_normalize,
                 "Rescale un-normalized input states instead of rejecting them");
    app.add_flag("--bits", common.bits, "Report entropies in bits instead of nats");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a seeded pseudo-random state set");
    generate->add_option("--dimension", gen.dim, "Hilbert space dimension D")->required();
    generate->add_option("--count", gen.count, "Number of states M")->required();
    generate->add_option("--out", gen.out, "Output state-set file")->required();

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the PCA model of a state set");
    fit_cmd->add_option("input", fit.in, "State-set file")->required();
    fit_cmd->add_option("output", fit.out, "Model file to write")->required();

    DecimateArgs dec;
    auto* decimate = app.add_subcommand("decimate", "Coarse-grain the specifying states of a model");
    decimate->add_option("model", dec.model, "Model file")->required();
    decimate->add_option("--d", dec.d, "Retained dimension, 2 <= d <= M+1");
    decimate->add_option("--eps", dec.eps, "Choose d so every state keeps weight >= 1 - eps");
    decimate->add_option("--out", dec.out, "Output file of coarse weight vectors")->required();

    EntropyArgs ent;
    auto* entropy = app.add_subcommand("entropy-curve", "Qubit entropy vs retained components");
    entropy->add_option("states", ent.states, "State-set file (D = 2^n)")->required();
    entropy->add_option("--state", ent.state, "State index, 1-based");
    entropy->add_option("--qubit", ent.qubit, "Qubit index, 1-based, 1 = most significant bit");
    entropy->add_option("--out", ent.out, "Output CSV curve");
    entropy->add_flag("--fine", ent.fine, "Print the entropy of the untruncated state");

    EvolveArgs evo;
    auto* evolve = app.add_subcommand("evolve", "Coarse-grain a unitary trajectory");
    evolve->add_option("--hamiltonian", evo.hamiltonian, "zero | random:<seed> | ising:<n>,<J>,<g>")
        ->required();
    evolve->add_option("--dimension", evo.dimension, "Dimension for zero/random Hamiltonians");
    evolve->add_option("--psi0", evo.psi0, "uniform | random | basis:<i> | <state-set file>");
    evolve->add_option("--dt", evo.dt, "Time step")->required();
    evolve->add_option("--steps", evo.steps, "Number of states M")->required();
    evolve->add_option("--d", evo.d, "Retained dimension for the coarse Hamiltonian");
    evolve->add_option("--out-prefix", evo.out_prefix, "Prefix for output files")->required();

    std::string info_path;
    auto* info = app.add_subcommand("info", "Summarize a state-set or model file");
    info->add_option("file", info_path, "File to inspect")->required();

    for (auto* sub : {generate, fit_cmd, decimate, entropy, evolve, info}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitDomain;
    }

    try {
        if (*generate) return cmd_generate(gen, common);
        if (*fit_cmd) return cmd_fit(fit, common);
        if (*decimate) return cmd_decimate(dec, common);
        if (*entropy) return cmd_entropy_curve(ent, common);
        if (*evolve) return cmd_evolve(evo, common);
        if (*info) return cmd_info(info_path, common);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitDomain;
}
