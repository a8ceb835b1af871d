#include <doctest.h>

#include <mimocap/capacity.hpp>
#include <mimocap/figures.hpp>
#include <mimocap/scenario_io.hpp>
#include <mimocap/verify.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace mimocap;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Parse a CSV written by the library: skip # comments, return rows of
/// string fields; first non-comment row is the header.
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::filesystem::path fresh_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("mimocap_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli_surface") {

TEST_CASE("figure files are deterministic") {
    const auto dir1 = fresh_dir("fig3a");
    const auto dir2 = fresh_dir("fig3b");
    const auto files1 = run_figure("fig3", dir1.string());
    const auto files2 = run_figure("fig3", dir2.string());
    REQUIRE(files1.size() == files2.size());
    for (std::size_t i = 0; i < files1.size(); ++i) {
        CHECK(slurp(files1[i]) == slurp(files2[i]));
    }
    CHECK_THROWS_AS(run_figure("fig9", dir1.string()), std::invalid_argument);
}

TEST_CASE("fig2: delta = 1 curve equals the equal-power 3-antenna configuration") {
    const auto dir = fresh_dir("fig2");
    (void)run_figure("fig2", dir.string());
    const auto d1 = read_csv((dir / "fig2_delta1.00.csv").string());
    REQUIRE(d1.size() > 2);
    for (std::size_t r = 1; r < d1.size(); ++r) {
        const double snr_db = std::stod(d1[r][0]);
        const double bits = std::stod(d1[r][1]);
        const double snr = std::pow(10.0, snr_db / 10.0);
        const double want =
            capacity_su(CovarianceSpec::from_groups({{snr / 3.0, 3}}), 3).value_bits;
        CHECK(bits == doctest::Approx(want).epsilon(1e-8));
    }
    // monotone in delta at every SNR: the cross-curve check
    std::vector<std::vector<std::vector<std::string>>> curves;
    for (const char* tag : {"0.00", "0.25", "0.50", "0.75", "1.00"})
        curves.push_back(read_csv((dir / ("fig2_delta" + std::string(tag) + ".csv")).string()));
    for (std::size_t r = 1; r < curves[0].size(); ++r) {
        for (std::size_t c = 1; c < curves.size(); ++c) {
            CHECK(std::stod(curves[c][r][1]) < std::stod(curves[c - 1][r][1]));
        }
    }
}

TEST_CASE("fig3: exact bound never exceeds the Jensen bound") {
    const auto dir = fresh_dir("fig3c");
    (void)run_figure("fig3", dir.string());
    const auto exact = read_csv((dir / "fig3_exact.csv").string());
    const auto jensen = read_csv((dir / "fig3_jensen.csv").string());
    REQUIRE(exact.size() == jensen.size());
    REQUIRE(exact.size() > 2);
    for (std::size_t r = 1; r < exact.size(); ++r) {
        CHECK(std::stod(exact[r][1]) <= std::stod(jensen[r][1]));
    }
}

TEST_CASE("fig4: high-SIR endpoint approaches the single-user diamond") {
    const auto dir = fresh_dir("fig4");
    (void)run_figure("fig4", dir.string());
    const auto refs = read_csv((dir / "fig4_references.csv").string());
    double diamond = 0.0;
    for (std::size_t r = 1; r < refs.size(); ++r)
        if (refs[r][0] == "diamond_su_6x6") diamond = std::stod(refs[r][2]);
    REQUIRE(diamond > 0.0);
    const auto nt1 = read_csv((dir / "fig4_nt1_1.csv").string());
    const auto& last = nt1.back();  // SIR = +40 dB
    CHECK(std::stod(last[0]) == doctest::Approx(40.0));
    CHECK(std::abs(std::stod(last[1]) - diamond) < 0.05);
}

TEST_CASE("sweep csv carries units, digest and failure rows") {
    NetworkScenario s;
    s.receive_antennas = 4;
    s.noise_power = 1.0;
    s.users = {{2, 10.0}, {2, 1.0}};
    const std::vector<double> grid = {-10.0, 0.0, 10.0};
    const auto sw = sweep(s, SweepAxis::Sir, grid);
    std::ostringstream out;
    write_sweep_csv(sw, out);
    const std::string text = out.str();
    CHECK(text.find("bits/s/Hz") != std::string::npos);
    CHECK(text.find(scenario_digest(s)) != std::string::npos);
    CHECK(text.find("axis_db,c_mu_bits,c_gauss_bits,c_su_ref_bits,warnings") !=
          std::string::npos);
    // deterministic
    std::ostringstream out2;
    write_sweep_csv(sweep(s, SweepAxis::Sir, grid), out2);
    CHECK(out2.str() == text);
}

TEST_CASE("verify quick passes and reports deterministically") {
    const auto results = run_verify(VerifyDepth::Quick, 7);
    std::ostringstream report1;
    const int failures = write_verify_report(results, report1);
    CHECK(failures == 0);
    for (const auto& r : results) {
        CAPTURE(r.name);
        CAPTURE(r.measured);
        CHECK(r.pass);
    }
    std::ostringstream report2;
    (void)write_verify_report(run_verify(VerifyDepth::Quick, 7), report2);
    CHECK(report1.str() == report2.str());
}

}  // TEST_SUITE
