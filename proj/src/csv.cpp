#include "ranktraffic/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ranktraffic {

std::string format_double(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, end);
}

namespace {

const char* mode_name(CurveMode mode) {
    switch (mode) {
        case CurveMode::exact: return "exact";
        case CurveMode::monte_carlo: return "monte_carlo";
        case CurveMode::convolved: return "convolved";
    }
    return "unknown";
}

CurveMode mode_from_name(const std::string& name) {
    if (name == "exact") return CurveMode::exact;
    if (name == "monte_carlo") return CurveMode::monte_carlo;
    if (name == "convolved") return CurveMode::convolved;
    throw std::runtime_error("unknown curve mode: " + name);
}

}  // namespace

void write_traffic_csv(const TrafficCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_traffic_csv: cannot open " + path);
    out << "# N=" << curve.n_pages << "\n";
    out << "# alpha=" << format_double(curve.alpha) << "\n";
    out << "# h=" << format_double(curve.h) << "\n";
    if (curve.mode == CurveMode::convolved) {
        out << "# delta=" << format_double(curve.delta) << "\n";
        out << "# h_min=" << format_double(curve.dist_h_min) << "\n";
        out << "# h_max=" << format_double(curve.dist_h_max) << "\n";
    }
    out << "# queries=" << curve.queries << "\n";
    out << "# mode=" << mode_name(curve.mode) << "\n";
    out << "R,t\n";
    for (std::size_t i = 0; i < curve.t.size(); ++i)
        out << (i + 1) << "," << format_double(curve.t[i]) << "\n";
    if (!out) throw std::runtime_error("write_traffic_csv: write failed for " + path);
}

TrafficCurve read_traffic_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_traffic_csv: cannot open " + path);
    TrafficCurve curve;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            key.erase(key.find_last_not_of(' ') + 1);
            const std::string value = line.substr(eq + 1);
            if (key == "N") curve.n_pages = std::stoull(value);
            else if (key == "alpha") curve.alpha = std::stod(value);
            else if (key == "h") curve.h = std::stod(value);
            else if (key == "delta") curve.delta = std::stod(value);
            else if (key == "h_min") curve.dist_h_min = std::stod(value);
            else if (key == "h_max") curve.dist_h_max = std::stod(value);
            else if (key == "queries") curve.queries = std::stoull(value);
            else if (key == "mode") curve.mode = mode_from_name(value);
            continue;
        }
        if (!header_seen) {  // "R,t" column header
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_traffic_csv: " + path + ":" +
                                     std::to_string(lineno) + ": malformed row");
        curve.t.push_back(std::stod(line.substr(comma + 1)));
    }
    if (curve.n_pages == 0) curve.n_pages = curve.t.size();
    if (curve.n_pages != curve.t.size())
        throw std::runtime_error("read_traffic_csv: " + path +
                                 ": row count does not match declared N");
    return curve;
}

void write_binned_csv(const BinnedCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_binned_csv: cannot open " + path);
    out << "bin_center,t_mean,t_stderr,count\n";
    for (std::size_t i = 0; i < curve.size(); ++i)
        out << format_double(curve.center[i]) << "," << format_double(curve.mean[i])
            << "," << format_double(curve.stderr_of_mean[i]) << ","
            << curve.count[i] << "\n";
    if (!out) throw std::runtime_error("write_binned_csv: write failed for " + path);
}

BinnedCurve read_binned_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_binned_csv: cannot open " + path);
    BinnedCurve curve;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 4)
            throw std::runtime_error("read_binned_csv: " + path + ":" +
                                     std::to_string(lineno) + ": expected 4 columns");
        curve.center.push_back(std::stod(fields[0]));
        curve.mean.push_back(std::stod(fields[1]));
        curve.stderr_of_mean.push_back(std::stod(fields[2]));
        curve.count.push_back(std::stoull(fields[3]));
        curve.bin_index.push_back(0);  // unknown grid; index unused for fitting
    }
    return curve;
}

}  // namespace ranktraffic
