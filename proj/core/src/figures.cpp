#include "mimocap/figures.hpp"

#include "mimocap/capacity.hpp"
#include "mimocap/csv.hpp"
#include "mimocap/scenario_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mimocap {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

std::vector<double> default_snr_grid() { return parse_grid_spec("-10:30:2"); }
std::vector<double> default_sir_grid() { return parse_grid_spec("-40:40:2"); }

std::ofstream open_csv(const std::string& dir, const std::string& name,
                       std::vector<std::string>* written) {
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);  // LF endings everywhere
    if (!out) throw std::runtime_error("cannot write " + path);
    written->push_back(path);
    return out;
}

std::string join_warnings(const std::vector<std::string>& warnings) {
    std::string out;
    for (const auto& w : warnings) {
        if (!out.empty()) out += "; ";
        for (char c : w) out += (c == ',' ? ';' : c);
    }
    return out;
}

void write_sweep_rows(CsvWriter& csv, const ScenarioSweep& sw) {
    csv.header({"axis_db", "c_mu_bits", "c_gauss_bits", "c_su_ref_bits", "warnings"});
    for (const auto& pt : sw.points) {
        if (pt.ok) {
            std::vector<std::string> warn = pt.mu.diagnostics.warnings;
            csv.row({format_double(pt.axis_db), format_double(pt.mu.value_bits),
                     format_double(pt.gauss.value_bits), format_double(pt.su_ref.value_bits),
                     join_warnings(warn)});
        } else {
            csv.row({format_double(pt.axis_db), "", "", "",
                     join_warnings({"point failed: " + pt.error})});
        }
    }
}

/// Interference-free transmit power profile, zero-power antennas dropped
/// (a zero eigenvalue contributes nothing and the density constant needs
/// strictly positive eigenvalues).
CovarianceSpec profile_spec(const std::vector<double>& per_antenna_rho) {
    std::vector<double> positive;
    for (double v : per_antenna_rho)
        if (v > 0.0) positive.push_back(v);
    return canonicalize(positive);
}

std::vector<std::string> figure2(const std::string& dir) {
    std::vector<std::string> written;
    const std::vector<double> deltas = {0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<std::string> tags = {"0.00", "0.25", "0.50", "0.75", "1.00"};
    const std::vector<double> grid = default_snr_grid();
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        auto out = open_csv(dir, "fig2_delta" + tags[di] + ".csv", &written);
        CsvWriter csv(out);
        csv.comment("single-user MIMO-(6,3), transmit powers {1+d,1+d,1+d,1-d,1-d,1-d}, d=" +
                    tags[di]);
        csv.comment("units: snr_db in dB, capacity in bits/s/Hz");
        csv.header({"snr_db", "capacity_bits"});
        for (double snr_db : grid) {
            const double snr = std::pow(10.0, snr_db / 10.0);
            std::vector<double> rho(6);
            for (int a = 0; a < 3; ++a) rho[a] = snr / 6.0 * (1.0 + deltas[di]);
            for (int a = 3; a < 6; ++a) rho[a] = snr / 6.0 * (1.0 - deltas[di]);
            const CapacityResult c = capacity_su(profile_spec(rho), 3);
            csv.row({format_double(snr_db), format_double(c.value_bits)});
        }
    }
    return written;
}

std::vector<std::string> figure3(const std::string& dir) {
    std::vector<std::string> written;
    const std::vector<double> weights = {1, 2, 5, 10, 20};
    const int relay_antennas = 2;
    const int source_antennas = 4;
    double weight_sum = 0.0;
    for (double w : weights) weight_sum += w * relay_antennas;
    const std::vector<double> grid = default_snr_grid();

    auto exact = open_csv(dir, "fig3_exact.csv", &written);
    auto jensen = open_csv(dir, "fig3_jensen.csv", &written);
    CsvWriter ce(exact), cj(jensen);
    for (CsvWriter* c : {&ce, &cj}) {
        c->comment(
            "relay-network capacity bound: 4-antenna source, 5 relays x 2 antennas, relay "
            "powers proportional to {1,2,5,10,20}, snr = trace of the covariance");
        c->comment("units: snr_db in dB, cu in bits/s/Hz");
        c->header({"snr_db", "cu_bits"});
    }
    for (double snr_db : grid) {
        const double snr = std::pow(10.0, snr_db / 10.0);
        std::vector<EigenGroup> groups;
        for (double w : weights) groups.push_back({snr * w / weight_sum, relay_antennas});
        const CapacityResult exact_cu =
            relay_upper_bound(CovarianceSpec::from_groups(groups), source_antennas);
        // Jensen: E[H Phi H^dag] = tr(Phi) I, so the bound is p/2 log(1 + tr Phi).
        const double jensen_bits = 0.5 * source_antennas * std::log1p(snr) / kLn2;
        ce.row({format_double(snr_db), format_double(exact_cu.value_bits)});
        cj.row({format_double(snr_db), format_double(jensen_bits)});
    }
    return written;
}

std::vector<std::string> figure4(const std::string& dir) {
    std::vector<std::string> written;
    const double snr_db = 10.0;
    const double p0 = std::pow(10.0, snr_db / 10.0);  // sigma2 = 1
    const std::vector<int> nt1_set = {1, 2, 4, 6, 10};
    const std::vector<double> grid = default_sir_grid();

    for (int nt1 : nt1_set) {
        NetworkScenario base;
        base.receive_antennas = 6;
        base.noise_power = 1.0;
        base.users = {{6, p0}, {nt1, p0}};  // interferer power set per grid point
        const ScenarioSweep sw = sweep(base, SweepAxis::Sir, grid);
        auto out = open_csv(dir, "fig4_nt1_" + std::to_string(nt1) + ".csv", &written);
        CsvWriter csv(out);
        csv.comment("MIMO-(6,6) at SNR 10 dB, one cochannel interferer with NT1 = " +
                    std::to_string(nt1));
        csv.comment("units: axis dB, capacity bits/s/Hz; scenario=" +
                    scenario_digest(sw.scenario));
        write_sweep_rows(csv, sw);
        if (nt1 == nt1_set.front()) {
            auto gout = open_csv(dir, "fig4_gauss.csv", &written);
            CsvWriter gcsv(gout);
            gcsv.comment(
                "Gaussian interference approximation for MIMO-(6,6) at SNR 10 dB (depends "
                "only on total interference power)");
            gcsv.comment("units: sir_db in dB, capacity bits/s/Hz");
            gcsv.header({"sir_db", "c_gauss_bits"});
            for (const auto& pt : sw.points)
                gcsv.row({format_double(pt.axis_db), format_double(pt.gauss.value_bits)});
        }
    }

    auto refs = open_csv(dir, "fig4_references.csv", &written);
    CsvWriter rcsv(refs);
    rcsv.comment("single-user reference levels at SNR 10 dB");
    rcsv.comment("units: capacity bits/s/Hz");
    rcsv.header({"label", "nt1", "capacity_bits"});
    const CovarianceSpec desired = CovarianceSpec::from_groups({{p0 / 6.0, 6}});
    rcsv.row({"diamond_su_6x6", "0", format_double(capacity_su(desired, 6).value_bits)});
    for (int nt1 : {1, 2, 4}) {
        rcsv.row({"circle_su_6x" + std::to_string(6 - nt1), std::to_string(nt1),
                  format_double(capacity_su(desired, 6 - nt1).value_bits)});
    }
    return written;
}

std::vector<std::string> figure5(const std::string& dir) {
    std::vector<std::string> written;
    const double p0 = 10.0;  // SNR 10 dB, sigma2 = 1
    const std::vector<double> grid = default_sir_grid();

    for (int nt0 : {3, 4, 5, 6}) {
        for (int ni : {1, 2}) {
            NetworkScenario base;
            base.receive_antennas = 6;
            base.noise_power = 1.0;
            base.users = {{nt0, p0}};
            for (int i = 0; i < ni; ++i)
                base.users.push_back({nt0, p0 / ni});  // equal split of interference power
            const ScenarioSweep sw = sweep(base, SweepAxis::Sir, grid);
            auto out = open_csv(
                dir, "fig5_nt" + std::to_string(nt0) + "_ni" + std::to_string(ni) + ".csv",
                &written);
            CsvWriter csv(out);
            csv.comment("NR=6 at SNR 10 dB, " + std::to_string(ni) +
                        " interferer(s), all terminals with NT0 = " + std::to_string(nt0));
            csv.comment("units: axis dB, capacity bits/s/Hz; scenario=" +
                        scenario_digest(sw.scenario));
            write_sweep_rows(csv, sw);
            if (ni == 1) {
                auto gout = open_csv(dir, "fig5_gauss_nt" + std::to_string(nt0) + ".csv",
                                     &written);
                CsvWriter gcsv(gout);
                gcsv.comment("Gaussian interference approximation, NT0 = " +
                             std::to_string(nt0));
                gcsv.comment("units: sir_db in dB, capacity bits/s/Hz");
                gcsv.header({"sir_db", "c_gauss_bits"});
                for (const auto& pt : sw.points)
                    gcsv.row({format_double(pt.axis_db), format_double(pt.gauss.value_bits)});
            }
        }
    }

    auto refs = open_csv(dir, "fig5_references.csv", &written);
    CsvWriter rcsv(refs);
    rcsv.comment("interference-free single-user MIMO-(NT0,6) asymptotes at SNR 10 dB");
    rcsv.comment("units: capacity bits/s/Hz");
    rcsv.header({"nt0", "capacity_bits"});
    for (int nt0 : {3, 4, 5, 6}) {
        const CovarianceSpec spec = CovarianceSpec::from_groups({{p0 / nt0, nt0}});
        rcsv.row({std::to_string(nt0), format_double(capacity_su(spec, 6).value_bits)});
    }
    return written;
}

}  // namespace

void write_sweep_csv(const ScenarioSweep& sw, std::ostream& out) {
    CsvWriter csv(out);
    csv.comment(std::string("sweep axis: ") + (sw.axis == SweepAxis::Snr ? "snr" : "sir") +
                "; units: axis dB, capacity bits/s/Hz");
    csv.comment("scenario=" + scenario_digest(sw.scenario));
    write_sweep_rows(csv, sw);
}

std::vector<std::string> known_figures() { return {"fig2", "fig3", "fig4", "fig5"}; }

std::vector<std::string> run_figure(const std::string& name, const std::string& out_dir) {
    if (name == "fig2") return figure2(out_dir);
    if (name == "fig3") return figure3(out_dir);
    if (name == "fig4") return figure4(out_dir);
    if (name == "fig5") return figure5(out_dir);
    throw std::invalid_argument("unknown figure '" + name + "' (try fig2..fig5)");
}

}  // namespace mimocap
