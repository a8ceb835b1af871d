// Command-line front end: closed-form multiuser MIMO capacity, SNR/SIR
// sweeps, eigenvalue-pdf histograms, reference-figure reproduction, and the
// self-verification suite.

#include <CLI11.hpp>

#include "mimocap/capacity.hpp"
#include "mimocap/covariance.hpp"
#include "mimocap/csv.hpp"
#include "mimocap/eigpdf.hpp"
#include "mimocap/figures.hpp"
#include "mimocap/scenario_io.hpp"
#include "mimocap/verify.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct RunConfig {
    std::string scenario_path;
    std::string out_path;
    std::uint64_t seed = 0;
    long mc_samples = 100000;
    std::string figure;
    std::string axis = "sir";
    std::string grid = "-40:40:2";
    std::string verify_depth = "quick";
    std::string pdf_matrix = "phi0";
    int bins = 40;
    double x_max = 0.0;  // 0: choose from samples
    int component = 0;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

void require_mc_samples(long samples) {
    if (samples < 1000)
        throw CLI::ValidationError("--mc-samples", "Monte Carlo runs need at least 1000 samples");
}

int cmd_capacity(const RunConfig& cfg) {
    const mimocap::NetworkScenario scenario = mimocap::load_scenario_file(cfg.scenario_path);
    const mimocap::CapacityResult mu = mimocap::capacity_mu(scenario);
    const mimocap::CapacityResult gauss = mimocap::capacity_gaussian_approx(scenario);
    const double rho0 = scenario.rho(0);
    const mimocap::CapacityResult su = mimocap::capacity_su(
        mimocap::CovarianceSpec::from_groups({{rho0, scenario.users[0].antennas}}),
        scenario.receive_antennas);

    std::cout << "scenario " << mimocap::scenario_digest(scenario) << "\n";
    std::cout << "c_mu_bits    = " << mimocap::format_double(mu.value_bits) << "\n";
    std::cout << "c_gauss_bits = " << mimocap::format_double(gauss.value_bits) << "\n";
    std::cout << "c_su_ref_bits= " << mimocap::format_double(su.value_bits) << "\n";
    for (const auto& w : mu.diagnostics.warnings) std::cout << "warning: " << w << "\n";
    if (mu.diagnostics.mc_fallback) {
        const auto& f = *mu.diagnostics.mc_fallback;
        std::cout << "mc_fallback_bits = " << mimocap::format_double(f.mean / 0.6931471805599453)
                  << " +- " << mimocap::format_double(3.0 * f.std_error / 0.6931471805599453)
                  << " (3 sigma, " << f.samples << " samples)\n";
    }

    if (!cfg.out_path.empty()) {
        auto out = open_out(cfg.out_path);
        mimocap::CsvWriter csv(out);
        csv.comment("units: capacity bits/s/Hz; scenario=" + mimocap::scenario_digest(scenario));
        csv.header({"c_mu_bits", "c_gauss_bits", "c_su_ref_bits", "warnings"});
        std::string warn;
        for (const auto& w : mu.diagnostics.warnings) {
            if (!warn.empty()) warn += "; ";
            warn += w;
        }
        csv.row({mimocap::format_double(mu.value_bits), mimocap::format_double(gauss.value_bits),
                 mimocap::format_double(su.value_bits), warn});
    }
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const mimocap::NetworkScenario scenario = mimocap::load_scenario_file(cfg.scenario_path);
    const std::vector<double> grid = mimocap::parse_grid_spec(cfg.grid);
    const mimocap::SweepAxis axis =
        cfg.axis == "snr" ? mimocap::SweepAxis::Snr : mimocap::SweepAxis::Sir;
    const mimocap::ScenarioSweep sw = mimocap::sweep(scenario, axis, grid);
    if (cfg.out_path.empty()) {
        mimocap::write_sweep_csv(sw, std::cout);
    } else {
        auto out = open_out(cfg.out_path);
        mimocap::write_sweep_csv(sw, out);
        std::cout << "wrote " << cfg.out_path << "\n";
    }
    return 0;
}

int cmd_pdf(const RunConfig& cfg) {
    require_mc_samples(cfg.mc_samples);
    const mimocap::NetworkScenario scenario = mimocap::load_scenario_file(cfg.scenario_path);
    const mimocap::InterferenceMatrices m = mimocap::build_interference_matrices(scenario);

    mimocap::CovarianceSpec spec;
    if (cfg.pdf_matrix == "phi0") {
        spec = mimocap::CovarianceSpec::from_groups(
            {{scenario.rho(0), scenario.users[0].antennas}});
    } else if (cfg.pdf_matrix == "psi") {
        if (m.psi.is_empty()) throw std::runtime_error("scenario has no interferers: psi is empty");
        spec = m.psi;
    } else if (cfg.pdf_matrix == "psitilde") {
        spec = m.psi_tilde;
    } else {
        throw std::runtime_error("unknown --matrix (use phi0 | psi | psitilde)");
    }

    const auto samples = mimocap::sample_eigenvalues(spec, scenario.receive_antennas,
                                                     static_cast<int>(cfg.mc_samples), cfg.seed);
    double x_max = cfg.x_max;
    if (x_max <= 0.0) {
        for (const auto& s : samples) x_max = std::max(x_max, s.at(0));
        x_max *= 1.02;
    }
    const auto hist = mimocap::eigenvalue_histogram(
        samples, cfg.component, cfg.bins, 0.0, x_max);

    auto emit = [&](std::ostream& out) {
        mimocap::CsvWriter csv(out);
        csv.comment("eigenvalue " + std::to_string(cfg.component) +
                    " histogram of matrix '" + cfg.pdf_matrix + "'; " +
                    std::to_string(samples.size()) + " samples, seed=" +
                    std::to_string(cfg.seed));
        csv.comment("units: eigenvalue (linear), density (1/x); scenario=" +
                    mimocap::scenario_digest(scenario));
        csv.header({"bin_left", "bin_right", "density", "stderr"});
        for (const auto& b : hist)
            csv.row({mimocap::format_double(b.left), mimocap::format_double(b.right),
                     mimocap::format_double(b.density), mimocap::format_double(b.std_error)});
    };
    if (cfg.out_path.empty()) {
        emit(std::cout);
    } else {
        auto out = open_out(cfg.out_path);
        emit(out);
        std::cout << "wrote " << cfg.out_path << "\n";
    }
    return 0;
}

int cmd_figure(const RunConfig& cfg) {
    const std::string out_dir = cfg.out_path.empty() ? "." : cfg.out_path;
    const auto files = mimocap::run_figure(cfg.figure, out_dir);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const mimocap::VerifyDepth depth =
        cfg.verify_depth == "full" ? mimocap::VerifyDepth::Full : mimocap::VerifyDepth::Quick;
    const auto results = mimocap::run_verify(depth, cfg.seed);
    int failures = 0;
    if (cfg.out_path.empty()) {
        failures = mimocap::write_verify_report(results, std::cout);
    } else {
        auto out = open_out(cfg.out_path);
        failures = mimocap::write_verify_report(results, out);
        std::cout << (failures == 0 ? "all checks passed" : "failures detected") << "; report at "
                  << cfg.out_path << "\n";
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form ergodic MIMO capacity with interference"};
    app.require_subcommand(0, 1);

    RunConfig cfg;

    // Top-level shortcuts mirroring the flag interface.
    std::string top_figure, top_verify;
    app.add_option("--figure", top_figure, "write figure CSVs (fig2|fig3|fig4|fig5)");
    app.add_option("--verify", top_verify, "run verification suite (quick|full)")
        ->check(CLI::IsMember({"quick", "full"}));
    app.add_option("--out", cfg.out_path, "output file or directory");
    app.add_option("--seed", cfg.seed, "random seed for Monte Carlo paths");

    auto* capacity = app.add_subcommand("capacity", "multiuser capacity of a scenario file");
    capacity->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
    capacity->add_option("--out", cfg.out_path, "optional CSV output");
    capacity->add_option("--seed", cfg.seed, "seed (used only by fallback estimates)");
    capacity->add_option("--mc-samples", cfg.mc_samples, "fallback sample count");

    auto* sweepc = app.add_subcommand("sweep", "capacity sweep over an SNR or SIR grid");
    sweepc->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
    sweepc->add_option("--axis", cfg.axis, "sweep axis")->check(CLI::IsMember({"snr", "sir"}));
    sweepc->add_option("--grid", cfg.grid, "dB grid as start:stop:step");
    sweepc->add_option("--out", cfg.out_path, "CSV output path");
    sweepc->add_option("--seed", cfg.seed, "seed (used only by fallback estimates)");

    auto* pdfc = app.add_subcommand("pdf", "Monte Carlo eigenvalue histogram CSV");
    pdfc->add_option("--scenario", cfg.scenario_path, "scenario file")->required();
    pdfc->add_option("--matrix", cfg.pdf_matrix, "phi0 | psi | psitilde");
    pdfc->add_option("--seed", cfg.seed, "random seed (reproducible runs)")->required();
    pdfc->add_option("--mc-samples", cfg.mc_samples, "sample count (>= 1000)");
    pdfc->add_option("--bins", cfg.bins, "histogram bins");
    pdfc->add_option("--x-max", cfg.x_max, "histogram upper edge (default: from samples)");
    pdfc->add_option("--component", cfg.component, "eigenvalue index, 0 = largest");
    pdfc->add_option("--out", cfg.out_path, "CSV output path");

    auto* figc = app.add_subcommand("figure", "reproduce a reference figure as CSV files");
    figc->add_option("--figure", cfg.figure, "fig2 | fig3 | fig4 | fig5")->required();
    figc->add_option("--out", cfg.out_path, "output directory");

    auto* verc = app.add_subcommand("verify", "run the cross-validation suites");
    verc->add_option("--verify", cfg.verify_depth, "quick | full")
        ->check(CLI::IsMember({"quick", "full"}));
    verc->add_option("--seed", cfg.seed, "seed for the Monte Carlo checks");
    verc->add_option("--out", cfg.out_path, "write the report to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (capacity->parsed()) return cmd_capacity(cfg);
        if (sweepc->parsed()) return cmd_sweep(cfg);
        if (pdfc->parsed()) return cmd_pdf(cfg);
        if (figc->parsed()) return cmd_figure(cfg);
        if (verc->parsed()) return cmd_verify(cfg);
        if (!top_figure.empty()) {
            cfg.figure = top_figure;
            return cmd_figure(cfg);
        }
        if (!top_verify.empty()) {
            cfg.verify_depth = top_verify;
            return cmd_verify(cfg);
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
