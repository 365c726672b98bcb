// Copyright 2026 The qrem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qrem: detector tomography, readout-noise characterization, and certified
// readout-error mitigation from the command line.
//
// Exit codes: 0 success (or a successful mitigation verdict), 1 usage or
// parse error, 2 numerical failure, 3 mitigation verdict not successful.

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrem/io.hpp"
#include "qrem/qrem.hpp"

namespace {

using qrem::io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitNotSuccessful = 3;

int exit_code_for(const qrem::Error &e) {
    switch (e.kind()) {
        case qrem::ErrorKind::Parse:
        case qrem::ErrorKind::BadLabel:
            return kExitUsage;
        default:
            return kExitNumerical;
    }
}

void emit(const std::string &path, const json &j) {
    if (path.empty() || path == "-") {
        std::cout << qrem::io::dump(j);
    } else {
        qrem::io::write_json_file(path, j);
    }
}

std::size_t qubit_count(std::size_t dim) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < dim) ++k;
    if ((std::size_t{1} << k) != dim) {
        throw qrem::Error(qrem::ErrorKind::DimensionMismatch, "dimension " + std::to_string(dim) + " is not 2^K");
    }
    return k;
}

json readout_json(const qrem::ReadoutParams &r) {
    return json{{"n0", r.n0}, {"nx", r.nx}, {"ny", r.ny}, {"nz", r.nz}, {"z_mag", r.z_mag}, {"p", r.p}, {"q", r.q}};
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string calibration;
    std::string out;
    std::string report;
    std::string probe_set = "overcomplete";
    double tol = 1e-10;
    std::size_t max_iter = 10000;
};

int cmd_fit(const FitArgs &a) {
    const std::string text = qrem::io::read_text_file(a.calibration);
    qrem::io::Calibration cal = qrem::io::calibration_from_json(qrem::io::parse_json(text, a.calibration), a.calibration);
    const auto set = qrem::probe_set_from_string(a.probe_set);
    std::vector<qrem::CalibrationRecord> used;
    for (auto &r : cal.records)
        if (set == qrem::ProbeSet::overcomplete || qrem::in_probe_set(r.label, set)) used.push_back(r);

    const auto result = qrem::mle_fit(used, {a.tol, a.max_iter, false});
    qrem::io::write_json_file(a.out, qrem::io::povm_to_json(result.povm));

    json rep;
    rep["kind"] = "fit";
    rep["diagnostics"] = qrem::io::to_json(result.diagnostics);
    rep["records_used"] = used.size();
    rep["provenance"] = qrem::io::provenance(
        "fit", {{a.calibration, qrem::io::digest(text)}}, std::nullopt,
        json{{"probe_set", a.probe_set}, {"tol", a.tol}, {"max_iter", a.max_iter}});
    emit(a.report, rep);
    if (!result.diagnostics.converged) {
        std::cerr << "qrem fit: MLE did not converge after " << result.diagnostics.iterations
                  << " iterations (last change " << result.diagnostics.final_change << ")\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct CharacterizeArgs {
    std::vector<std::string> povms;
    std::string out;
    std::string correction_out;
    std::size_t subsets = qrem::kDefaultSampledSubsets;
    std::uint64_t seed = 0;
};

int cmd_characterize(const CharacterizeArgs &a) {
    std::map<std::string, std::string> digests;
    std::vector<qrem::Povm> factors;
    for (const auto &path : a.povms) {
        const std::string text = qrem::io::read_text_file(path);
        digests[path] = qrem::io::digest(text);
        factors.push_back(qrem::io::povm_from_json(qrem::io::parse_json(text, path), path));
    }
    const qrem::DistanceOptions dopts{a.subsets, qrem::Seed{a.seed}};

    // Per-factor classical parts; Lambda of the product is the product of
    // the factors' Lambdas because diagonals of Kronecker products factor.
    std::vector<qrem::Povm> ideals, classicals;
    std::vector<qrem::StochasticMatrix> lambdas;
    json per_factor = json::array();
    double column_residual = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto &m = factors[k];
        ideals.push_back(qrem::projective_computational(qubit_count(m.dim())));
        const auto decomp = qrem::classical_part(m, ideals.back(), dopts);
        lambdas.push_back(decomp.lambda);
        classicals.push_back(qrem::apply_lambda(decomp.lambda, ideals.back()));
        column_residual = std::max(column_residual, decomp.column_residual);
        if (factors.size() > 1) {
            json f{{"file", a.povms[k]},
                   {"dop_ideal", qrem::io::to_json(qrem::operational_distance(m, ideals.back(), dopts))},
                   {"dop_classical", qrem::io::to_json(decomp.coherent_bound)}};
            if (m.dim() == 2 && m.size() == 2) f["readout"] = readout_json(qrem::readout_params(m));
            per_factor.push_back(std::move(f));
        }
    }

    const qrem::StochasticMatrix lambda = qrem::product_lambda(lambdas);
    const qrem::CorrectionMatrix c = qrem::correction_matrix(lambda);
    const qrem::DistanceBound dop_ideal = qrem::product_operational_distance(factors, ideals, dopts);
    const qrem::DistanceBound dop_classical = qrem::product_operational_distance(factors, classicals, dopts);
    const double norm = c.one_to_one_norm();

    json rep;
    rep["kind"] = "characterization";
    rep["dim"] = lambda.size();
    rep["outcomes"] = lambda.size();
    rep["dop_ideal"] = qrem::io::to_json(dop_ideal);
    rep["dop_classical"] = qrem::io::to_json(dop_classical);
    rep["norm_1to1"] = norm;
    rep["delta_infinite_statistics"] = norm * dop_classical.upper;
    rep["lambda"] = qrem::io::matrix_to_json(lambda.matrix());
    rep["correction"] = qrem::io::matrix_to_json(c.matrix());
    rep["column_residual"] = column_residual;
    if (factors.size() == 1 && factors.front().dim() == 2 && factors.front().size() == 2) {
        rep["readout"] = readout_json(qrem::readout_params(factors.front()));
    }
    if (factors.size() > 1) rep["factors"] = std::move(per_factor);
    rep["provenance"] = qrem::io::provenance("characterize", digests, a.seed, json{{"subsets", a.subsets}});
    emit(a.out, rep);

    if (!a.correction_out.empty()) {
        qrem::io::write_json_file(a.correction_out,
                                  qrem::io::correction_file_to_json({lambda, dop_classical.upper, dop_ideal}));
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct MitigateArgs {
    std::string counts;
    std::string correction;
    std::string out;
    double pr_err = qrem::kDefaultPrErr;
    std::optional<double> dop_bound;
    std::optional<double> coherent_distance;
};

int cmd_mitigate(const MitigateArgs &a) {
    const std::string counts_text = qrem::io::read_text_file(a.counts);
    const std::string corr_text = qrem::io::read_text_file(a.correction);
    const auto counts = qrem::io::counts_file_from_json(qrem::io::parse_json(counts_text, a.counts), a.counts);
    const auto corr = qrem::io::correction_file_from_json(qrem::io::parse_json(corr_text, a.correction), a.correction);
    if (counts.counts.size() != corr.lambda.size()) {
        throw qrem::Error(qrem::ErrorKind::Parse, "counts have " + std::to_string(counts.counts.size()) +
                                                      " outcomes but the correction matrix is " +
                                                      std::to_string(corr.lambda.size()) + "x" +
                                                      std::to_string(corr.lambda.size()));
    }
    const qrem::CorrectionMatrix c = qrem::correction_matrix(corr.lambda);

    qrem::MitigationContext ctx;
    ctx.pr_err = a.pr_err;
    ctx.coherent_distance = a.coherent_distance.value_or(corr.coherent_distance);
    ctx.dop_bound = a.dop_bound ? qrem::DistanceBound::exact(*a.dop_bound) : corr.dop_ideal;
    const auto report = qrem::mitigate(counts.counts, c, ctx);

    json rep = qrem::io::to_json(report);
    rep["kind"] = "mitigation";
    rep["qubits"] = counts.qubits;
    rep["dop_bound"] = qrem::io::to_json(ctx.dop_bound);
    json opts{{"pr_err", a.pr_err}};
    if (a.dop_bound) opts["dop_bound"] = *a.dop_bound;
    if (a.coherent_distance) opts["coherent_distance"] = *a.coherent_distance;
    rep["provenance"] = qrem::io::provenance(
        "mitigate", {{a.counts, qrem::io::digest(counts_text)}, {a.correction, qrem::io::digest(corr_text)}},
        std::nullopt, opts);
    emit(a.out, rep);
    return report.successful ? kExitOk : kExitNotSuccessful;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string povm;
    std::string out;
    std::string csv;
    std::size_t trials = 10000;
    std::uint64_t shots = 8192;
    double pr_err = qrem::kDefaultPrErr;
    std::uint64_t seed = 0;
    std::vector<double> z_sweep;
    std::size_t threads = 1;
    std::size_t subsets = qrem::kDefaultSampledSubsets;
};

int cmd_simulate_f(const SimulateArgs &a) {
    const std::string text = qrem::io::read_text_file(a.povm);
    const qrem::Povm noisy = qrem::io::povm_from_json(qrem::io::parse_json(text, a.povm), a.povm);
    qrem::FractionOptions opts;
    opts.trials = a.trials;
    opts.shots = a.shots;
    opts.pr_err = a.pr_err;
    opts.seed = qrem::Seed{a.seed};
    opts.threads = a.threads;
    opts.distance = {a.subsets, qrem::Seed{a.seed}};

    std::vector<qrem::SweepPoint> points;
    if (a.z_sweep.empty()) {
        const qrem::Povm ideal = qrem::projective_computational(qubit_count(noisy.dim()));
        const double z = (noisy.dim() == 2 && noisy.size() == 2) ? qrem::readout_params(noisy).z_mag : NAN;
        points.push_back({z, qrem::fraction_f(noisy, ideal, opts)});
    } else {
        if (noisy.dim() != 2 || noisy.size() != 2) {
            throw qrem::Error(qrem::ErrorKind::DimensionMismatch, "--z-sweep needs a single-qubit POVM");
        }
        const auto r = qrem::readout_params(noisy);
        points = qrem::coherent_sweep(r.p, r.q, a.z_sweep, opts);
    }

    json rep;
    rep["kind"] = "fraction";
    json pts = json::array();
    for (const auto &p : points) {
        json pj = qrem::io::to_json(p.report);
        pj["z"] = std::isnan(p.z) ? json(nullptr) : json(p.z);
        pts.push_back(std::move(pj));
    }
    rep["points"] = std::move(pts);
    json opt{{"trials", a.trials}, {"shots", a.shots}, {"pr_err", a.pr_err}, {"subsets", a.subsets}};
    if (!a.z_sweep.empty()) opt["z_sweep"] = a.z_sweep;
    rep["provenance"] = qrem::io::provenance("simulate-f", {{a.povm, qrem::io::digest(text)}}, a.seed, opt);
    emit(a.out, rep);
    if (!a.csv.empty()) qrem::io::write_text_file(a.csv, qrem::io::sweep_csv(points));
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SynthCalibrationArgs {
    std::string povm;
    std::string out;
    std::string probe_set = "overcomplete";
    std::uint64_t shots = 8192;
    std::optional<std::uint64_t> seed;
};

int cmd_synth_calibration(const SynthCalibrationArgs &a) {
    const qrem::Povm m = qrem::io::read_povm(a.povm);
    const auto qubits = qubit_count(m.dim());
    std::optional<qrem::Seed> seed;
    if (a.seed) seed = qrem::Seed{*a.seed};
    qrem::io::Calibration cal{qrem::io::default_qubit_labels(qubits),
                              qrem::synthesize_calibration(m, qrem::probe_set_from_string(a.probe_set), a.shots, seed)};
    emit(a.out, qrem::io::calibration_to_json(cal));
    return kExitOk;
}

struct SynthCountsArgs {
    std::string povm;
    std::string state;
    std::string out;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
};

int cmd_synth_counts(const SynthCountsArgs &a) {
    const qrem::Povm m = qrem::io::read_povm(a.povm);
    const auto p = qrem::born_probabilities(qrem::pauli_state(a.state), m);
    qrem::io::CountsFile file{qrem::io::default_qubit_labels(qubit_count(m.dim())),
                              qrem::sample_counts(p, a.shots, qrem::Seed{a.seed})};
    emit(a.out, qrem::io::counts_file_to_json(file));
    return kExitOk;
}

struct FixtureArgs {
    std::string name;
    std::string out;
    std::string dir;
    bool list = false;
};

int cmd_fixture(const FixtureArgs &a) {
    if (a.list) {
        for (const auto &n : qrem::fixtures::names()) std::cout << n << "\n";
        return kExitOk;
    }
    if (!a.dir.empty()) {
        for (const auto &n : qrem::fixtures::names())
            qrem::io::write_json_file((std::filesystem::path(a.dir) / (n + ".json")).string(),
                                      qrem::io::povm_to_json(qrem::fixtures::povm(n), n));
        return kExitOk;
    }
    if (a.name.empty()) throw qrem::Error(qrem::ErrorKind::Parse, "fixture: give a NAME, --list or --all DIR");
    emit(a.out, qrem::io::povm_to_json(qrem::fixtures::povm(a.name), a.name));
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Detector tomography and certified readout-error mitigation"};
    app.require_subcommand(1);

    FitArgs fit;
    auto *fit_cmd = app.add_subcommand("fit", "Maximum-likelihood POVM from calibration counts");
    fit_cmd->add_option("calibration", fit.calibration, "Calibration JSON file")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("-o,--out", fit.out, "Output POVM JSON file")->required();
    fit_cmd->add_option("--report", fit.report, "Diagnostics report (default: stdout)");
    fit_cmd->add_option("--probe-set", fit.probe_set, "Probe states to use")
        ->check(CLI::IsMember({"minimal", "overcomplete"}))
        ->capture_default_str();
    fit_cmd->add_option("--tol", fit.tol, "Stop when no effect moves more than this (Frobenius)")->capture_default_str();
    fit_cmd->add_option("--max-iter", fit.max_iter, "Iteration limit")->capture_default_str();

    CharacterizeArgs ch;
    auto *ch_cmd = app.add_subcommand(
        "characterize", "Distances to the ideal and classical detectors, Lambda and its inverse. "
                        "Several POVM files are treated as uncorrelated qubits, qubit 0 first.");
    ch_cmd->add_option("povm", ch.povms, "POVM JSON file(s)")->required()->check(CLI::ExistingFile);
    ch_cmd->add_option("-o,--out", ch.out, "Report file (default: stdout)");
    ch_cmd->add_option("--correction-out", ch.correction_out, "Write a correction file for 'mitigate'");
    ch_cmd->add_option("--subsets", ch.subsets, "Sampled subsets for the lower bound above 16 outcomes")
        ->capture_default_str();
    ch_cmd->add_option("--seed", ch.seed, "Seed for subset sampling")->capture_default_str();

    MitigateArgs mi;
    auto *mi_cmd = app.add_subcommand("mitigate", "Correct measured counts and certify the result");
    mi_cmd->add_option("counts", mi.counts, "Counts JSON file")->required()->check(CLI::ExistingFile);
    mi_cmd->add_option("correction", mi.correction, "Correction JSON file")->required()->check(CLI::ExistingFile);
    mi_cmd->add_option("-o,--out", mi.out, "Report file (default: stdout)");
    mi_cmd->add_option("--pr-err", mi.pr_err, "Accepted probability of exceeding epsilon")->capture_default_str();
    mi_cmd->add_option("--dop-bound", mi.dop_bound, "Override D_op(measured, ideal) on the right-hand side");
    mi_cmd->add_option("--coherent-distance", mi.coherent_distance, "Override D_op(measured, classical part)");

    SimulateArgs si;
    auto *si_cmd = app.add_subcommand("simulate-f", "Fraction of Haar-random states for which mitigation helps");
    si_cmd->add_option("povm", si.povm, "Noisy POVM JSON file")->required()->check(CLI::ExistingFile);
    si_cmd->add_option("-o,--out", si.out, "Report file (default: stdout)");
    si_cmd->add_option("--csv", si.csv, "Write (z, ratio, f, <alpha>) rows here");
    si_cmd->add_option("--trials", si.trials, "Haar-random states L")->check(CLI::PositiveNumber)->capture_default_str();
    si_cmd->add_option("--shots", si.shots, "Shots N per state")->check(CLI::PositiveNumber)->capture_default_str();
    si_cmd->add_option("--pr-err", si.pr_err, "Accepted error probability")->capture_default_str();
    si_cmd->add_option("--seed", si.seed, "Seed")->capture_default_str();
    si_cmd->add_option("--z-sweep", si.z_sweep, "Comma-separated off-diagonal magnitudes (single qubit)")
        ->delimiter(',');
    si_cmd->add_option("--threads", si.threads, "Worker threads (output does not depend on it)")
        ->capture_default_str();
    si_cmd->add_option("--subsets", si.subsets, "Sampled subsets for the lower bound above 16 outcomes")
        ->capture_default_str();

    SynthCalibrationArgs sc;
    auto *sc_cmd = app.add_subcommand("synth-calibration", "Simulated calibration counts for a POVM");
    sc_cmd->add_option("povm", sc.povm, "POVM JSON file")->required()->check(CLI::ExistingFile);
    sc_cmd->add_option("-o,--out", sc.out, "Calibration file (default: stdout)");
    sc_cmd->add_option("--probe-set", sc.probe_set, "Probe states")
        ->check(CLI::IsMember({"minimal", "overcomplete"}))
        ->capture_default_str();
    sc_cmd->add_option("--shots", sc.shots, "Shots per probe")->capture_default_str();
    sc_cmd->add_option("--seed", sc.seed, "Sample counts with this seed (omit for rounded expectations)");

    SynthCountsArgs sn;
    auto *sn_cmd = app.add_subcommand("synth-counts", "Sampled counts for a Pauli product state");
    sn_cmd->add_option("povm", sn.povm, "POVM JSON file")->required()->check(CLI::ExistingFile);
    sn_cmd->add_option("--state", sn.state, "State label, e.g. 'z- x+'")->required();
    sn_cmd->add_option("-o,--out", sn.out, "Counts file (default: stdout)");
    sn_cmd->add_option("--shots", sn.shots, "Shots")->capture_default_str();
    sn_cmd->add_option("--seed", sn.seed, "Seed")->capture_default_str();

    FixtureArgs fx;
    auto *fx_cmd = app.add_subcommand("fixture", "Export a bundled detector POVM");
    fx_cmd->add_option("name", fx.name, "Fixture name");
    fx_cmd->add_option("-o,--out", fx.out, "Output file (default: stdout)");
    fx_cmd->add_option("--all", fx.dir, "Write every fixture into this directory");
    fx_cmd->add_flag("--list", fx.list, "List fixture names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit);
        if (*ch_cmd) return cmd_characterize(ch);
        if (*mi_cmd) return cmd_mitigate(mi);
        if (*si_cmd) return cmd_simulate_f(si);
        if (*sc_cmd) return cmd_synth_calibration(sc);
        if (*sn_cmd) return cmd_synth_counts(sn);
        if (*fx_cmd) return cmd_fixture(fx);
    } catch (const qrem::Error &e) {
        std::cerr << "qrem: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception &e) {
        std::cerr << "qrem: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
