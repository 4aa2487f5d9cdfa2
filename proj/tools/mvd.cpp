// mvd: matrix-vector tensor decomposition toolbox.
//
// Subcommands: decompose, minrank, jennrich, generate, verify.
// Exit codes: 0 success, 1 I/O or parse error, 2 mathematical failure
// (hypothesis violation, failed certificate, degenerate spectrum, ...).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <mvdecomp/mvdecomp.hpp>
#include <mvdecomp/serialize.hpp>

namespace {

using mvd::json;

struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string decomposition; // verify: the claimed decomposition
    std::string truth;         // generate: ground-truth file
    std::string kind = "tensor";
    std::string mode; // empty: detect from input
    std::uint64_t seed = 0;
    bool seed_given = false;
    mvd::DecomposeOptions opts;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mvd::ParseError("cannot open input file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw mvd::ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw mvd::ParseError("cannot open output file '" + path + "'");
    out << j.dump(2) << "\n";
}

std::string effective_mode(const RunConfig& cfg, const json& input) {
    const std::string detected = mvd::detect_mode(input);
    if (!cfg.mode.empty() && cfg.mode != detected)
        throw mvd::ParseError("requested mode '" + cfg.mode +
                              "' but the input is in mode '" + detected + "'");
    return cfg.mode.empty() ? detected : cfg.mode;
}

template <class K>
json verification_report(const mvd::Tensor3<K>& t,
                         const mvd::MatrixVectorDecomposition<K>& d,
                         const mvd::DecomposeOptions& opts) {
    std::vector<mvd::Subspace<K>> images, timages;
    json term_ranks = json::array();
    for (const auto& term : d.terms()) {
        images.push_back(mvd::image(term.M, opts.tol_rank));
        timages.push_back(mvd::image(term.M.transpose(), opts.tol_rank));
        term_ranks.push_back(images.back().dim());
    }
    bool w_independent = true;
    for (std::size_t i = 0; i < d.q() && w_independent; ++i)
        for (std::size_t j = i + 1; j < d.q(); ++j)
            if (mvd::colinear(d.terms()[i].w, d.terms()[j].w)) {
                w_independent = false;
                break;
            }
    json report{
        {"q", d.q()},
        {"rank", d.rank()},
        {"term_ranks", term_ranks},
        {"images_direct_sum", mvd::direct_sum_check(images, opts.tol_rank)},
        {"transpose_images_direct_sum", mvd::direct_sum_check(timages, opts.tol_rank)},
        {"w_pairwise_independent", w_independent},
    };
    const mvd::Tensor3<K> rebuilt = mvd::reconstruct(d, t.m(), t.n(), t.p());
    if constexpr (mvd::is_exact_v<K>) {
        report["reconstruction_exact"] = (rebuilt == t);
        report["residual"] = 0.0;
    } else {
        report["residual"] = mvd::detail::tensor_rel_residual(rebuilt, t);
    }
    return report;
}

template <class K>
int run_decompose(const RunConfig& cfg, const json& input) {
    const auto t = mvd::tensor_from_json<K>(input);
    const auto d = mvd::canonicalize(mvd::decompose(t, cfg.seed, cfg.opts), cfg.opts.tol_rank);
    json out = mvd::decomposition_to_json(d);
    out["report"] = verification_report(t, d, cfg.opts);
    write_json(cfg.output, out);
    return 0;
}

template <class K>
int run_minrank(const RunConfig& cfg, const json& input) {
    const auto basis = mvd::basis_from_json<K>(input);
    try {
        const auto result = mvd::minrank(basis, cfg.seed, cfg.opts);
        write_json(cfg.output, mvd::minrank_result_to_json(result));
        return 0;
    } catch (const mvd::CertificateFailed& e) {
        write_json(cfg.output,
                   json{{"error", "CertificateFailed"},
                        {"certificate", mvd::certificate_to_json(e.certificate)},
                        {"mode", mvd::mode_name<K>()}});
        std::cerr << "mvd minrank: " << e.what() << "\n";
        return 2;
    }
}

int run_jennrich(const RunConfig& cfg, const json& input) {
    const auto t = mvd::tensor_from_json<double>(input);
    const auto outcome = mvd::jennrich_decompose_detailed(t, cfg.seed, cfg.opts);
    json out = mvd::rank_one_to_json(outcome.decomposition);
    out["residual"] = outcome.reconstruction_residual;
    out["pairing_residuals"] = outcome.pairing_residuals;
    write_json(cfg.output, out);
    return 0;
}

template <class K>
int run_generate(const RunConfig& cfg, mvd::InstanceSpec spec) {
    if (cfg.seed_given) spec.seed = cfg.seed;
    const std::string truth_path =
        !cfg.truth.empty() ? cfg.truth
                           : (cfg.output.empty() ? "" : cfg.output + ".truth.json");
    if (cfg.kind == "basis") {
        const auto gen = mvd::gen_minrank_basis<K>(spec);
        write_json(cfg.output, mvd::basis_to_json(gen.basis));
        json truth = mvd::basis_to_json(gen.hidden);
        truth["mixing"] = mvd::matrix_to_json(gen.mixing);
        write_json(truth_path, truth);
    } else if (cfg.kind == "tensor") {
        const auto gen = mvd::gen_instance<K>(spec);
        write_json(cfg.output, mvd::tensor_to_json(gen.tensor));
        write_json(truth_path, mvd::decomposition_to_json(gen.hidden));
    } else {
        throw mvd::ParseError("unknown --kind '" + cfg.kind + "'");
    }
    return 0;
}

template <class K>
int run_verify(const RunConfig& cfg, const json& tensor_json) {
    const auto t = mvd::tensor_from_json<K>(tensor_json);
    const json claim = read_json(cfg.decomposition);
    mvd::MatrixVectorDecomposition<K> d;
    try {
        d = mvd::decomposition_from_json<K>(claim);
    } catch (const mvd::InvalidDecomposition& e) {
        // a malformed claim (zero term, colinear weights) fails verification
        write_json(cfg.output, json{{"ok", false}, {"reason", e.what()}});
        return 2;
    }
    const json report = verification_report(t, d, cfg.opts);
    bool ok = report.at("images_direct_sum").template get<bool>() &&
              report.at("transpose_images_direct_sum").template get<bool>() &&
              report.at("w_pairwise_independent").template get<bool>();
    if constexpr (mvd::is_exact_v<K>) {
        ok = ok && report.at("reconstruction_exact").template get<bool>();
    } else {
        ok = ok && report.at("residual").template get<double>() <= cfg.opts.tol_resid;
    }
    json out = report;
    out["ok"] = ok;
    write_json(cfg.output, out);
    return ok ? 0 : 2;
}

int dispatch(const RunConfig& cfg) {
    if (cfg.command == "generate") {
        const mvd::InstanceSpec spec = mvd::spec_from_json(read_json(cfg.input));
        const std::string mode = cfg.mode.empty() ? spec.mode : cfg.mode;
        if (mode == "exact") return run_generate<mvd::Rational>(cfg, spec);
        if (mode == "float") return run_generate<double>(cfg, spec);
        throw mvd::ParseError("unknown mode '" + mode + "'");
    }

    const json input = read_json(cfg.input);
    const std::string mode = effective_mode(cfg, input);
    const bool exact = (mode == "exact");
    if (cfg.command == "decompose")
        return exact ? run_decompose<mvd::Rational>(cfg, input)
                     : run_decompose<double>(cfg, input);
    if (cfg.command == "minrank")
        return exact ? run_minrank<mvd::Rational>(cfg, input)
                     : run_minrank<double>(cfg, input);
    if (cfg.command == "jennrich") {
        if (exact)
            throw mvd::ParseError("jennrich runs in float mode; give a float tensor");
        return run_jennrich(cfg, input);
    }
    if (cfg.command == "verify")
        return exact ? run_verify<mvd::Rational>(cfg, input)
                     : run_verify<double>(cfg, input);
    throw mvd::ParseError("unknown command");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-vector tensor decomposition, minrank, and simultaneous "
                 "diagonalization"};
    app.require_subcommand(1);
    app.fallthrough(true);

    RunConfig cfg;
    app.add_option("--input", cfg.input, "input file (JSON)");
    app.add_option("--output", cfg.output, "output file (JSON); stdout if omitted");
    app.add_option("--mode", cfg.mode, "arithmetic mode: exact | float")
        ->check(CLI::IsMember({"exact", "float"}));
    auto* seed_opt = app.add_option("--seed", cfg.seed, "random seed (default 0)");
    app.add_option("--bound", cfg.opts.coefficient_bound,
                   "coefficient draw bound (default 10000)")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-retries", cfg.opts.max_retries,
                   "coefficient redraws before giving up (default 8)");
    app.add_option("--tol-rank", cfg.opts.tol_rank, "float rank tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-eig", cfg.opts.tol_eig, "eigenvalue clustering tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-prop", cfg.opts.tol_prop, "proportionality tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-resid", cfg.opts.tol_resid, "reconstruction residual tolerance")
        ->check(CLI::PositiveNumber);

    auto* cmd_decompose =
        app.add_subcommand("decompose", "matrix-vector decomposition of a tensor");
    auto* cmd_minrank =
        app.add_subcommand("minrank", "all minimum-rank matrices of a matrix subspace");
    auto* cmd_jennrich =
        app.add_subcommand("jennrich", "rank-one decomposition by simultaneous "
                                       "diagonalization (float)");
    auto* cmd_generate =
        app.add_subcommand("generate", "generate a seeded instance with ground truth");
    auto* cmd_verify =
        app.add_subcommand("verify", "check a claimed decomposition against a tensor");

    cmd_generate->add_option("--kind", cfg.kind, "what to generate: tensor | basis")
        ->check(CLI::IsMember({"tensor", "basis"}));
    cmd_generate->add_option("--truth", cfg.truth,
                             "ground-truth output file (default <output>.truth.json)");
    cmd_verify->add_option("--decomposition", cfg.decomposition,
                           "claimed decomposition file (JSON)");

    CLI11_PARSE(app, argc, argv);
    cfg.seed_given = seed_opt->count() > 0;

    for (const auto* sub :
         {cmd_decompose, cmd_minrank, cmd_jennrich, cmd_generate, cmd_verify})
        if (sub->parsed()) cfg.command = sub->get_name();

    try {
        return dispatch(cfg);
    } catch (const mvd::HypothesisViolation& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 2;
    } catch (const mvd::PairingFailure& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 2;
    } catch (const mvd::DegenerateSpectrum& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 2;
    } catch (const mvd::NotDisjointRows& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 2;
    } catch (const mvd::BasisNotIndependent& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 2;
    } catch (const mvd::IllConditioned& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 2;
    } catch (const mvd::NotDirectSum& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 2;
    } catch (const mvd::Error& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "mvd " << cfg.command << ": " << e.what() << "\n";
        return 1;
    }
}
