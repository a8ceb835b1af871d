#include "mimocap/scenario_io.hpp"

#include "mimocap/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mimocap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("scenario: cannot parse value '" + value + "' for key '" +
                                    key + "'");
    }
}

int parse_int(const std::string& value, const std::string& key) {
    const double v = parse_number(value, key);
    const int i = static_cast<int>(std::lround(v));
    if (i != v) throw std::invalid_argument("scenario: key '" + key + "' needs an integer");
    return i;
}

}  // namespace

NetworkScenario parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_nr = false, have_sigma2 = false;
    NetworkScenario scenario;
    struct UserDraft {
        int nt = 0;
        double p = 0.0;
        bool have_nt = false, have_p = false;
    };
    std::map<int, UserDraft> users;

    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "nr") {
            scenario.receive_antennas = parse_int(value, key);
            have_nr = true;
        } else if (key == "sigma2") {
            scenario.noise_power = parse_number(value, key);
            have_sigma2 = true;
        } else if (key.rfind("user.", 0) == 0) {
            const auto dot = key.find('.', 5);
            if (dot == std::string::npos)
                throw std::invalid_argument("scenario: malformed key '" + key + "'");
            const int idx = parse_int(key.substr(5, dot - 5), key);
            const std::string field = key.substr(dot + 1);
            UserDraft& u = users[idx];
            if (field == "nt") {
                u.nt = parse_int(value, key);
                u.have_nt = true;
            } else if (field == "p_db") {
                if (u.have_p)
                    throw std::invalid_argument("scenario: duplicate power for user " +
                                                std::to_string(idx));
                u.p = std::pow(10.0, parse_number(value, key) / 10.0);
                u.have_p = true;
            } else if (field == "p") {
                if (u.have_p)
                    throw std::invalid_argument("scenario: duplicate power for user " +
                                                std::to_string(idx));
                u.p = parse_number(value, key);
                u.have_p = true;
            } else {
                throw std::invalid_argument("scenario: unknown user field '" + field + "'");
            }
        } else {
            throw std::invalid_argument("scenario: unknown key '" + key + "'");
        }
    }

    if (!have_nr) throw std::invalid_argument("scenario: missing key 'nr'");
    if (!have_sigma2) throw std::invalid_argument("scenario: missing key 'sigma2'");
    if (users.empty()) throw std::invalid_argument("scenario: needs at least user.0");
    int expect = 0;
    for (const auto& [idx, u] : users) {
        if (idx != expect)
            throw std::invalid_argument("scenario: user indices must be contiguous from 0");
        if (!u.have_nt || !u.have_p)
            throw std::invalid_argument("scenario: user " + std::to_string(idx) +
                                        " needs both nt and p (or p_db)");
        scenario.users.push_back({u.nt, u.p});
        ++expect;
    }
    scenario.validate();
    return scenario;
}

NetworkScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string format_scenario(const NetworkScenario& scenario) {
    std::ostringstream out;
    out << "nr = " << scenario.receive_antennas << "\n";
    out << "sigma2 = " << format_double(scenario.noise_power) << "\n";
    for (std::size_t i = 0; i < scenario.users.size(); ++i) {
        out << "user." << i << ".nt = " << scenario.users[i].antennas << "\n";
        out << "user." << i << ".p = " << format_double(scenario.users[i].power) << "\n";
    }
    return out.str();
}

std::string scenario_digest(const NetworkScenario& scenario) {
    const std::string canon = format_scenario(scenario);
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    char extra = 0;
    const int got = std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra);
    if (got != 3)
        throw std::invalid_argument("grid spec must be 'start:stop:step', got '" + spec + "'");
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (!(stop >= start)) throw std::invalid_argument("grid stop must be >= start");
    std::vector<double> grid;
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(start + i * step);
    return grid;
}

}  // namespace mimocap
