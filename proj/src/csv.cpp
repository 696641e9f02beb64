#include "lsm/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lsm {

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_paths_csv(std::ostream& os, const PathSet& paths) {
    os << "path_index";
    for (int m = 0; m <= paths.grid.M; ++m) os << ",t_" << m;
    os << "\n";
    for (Eigen::Index n = 0; n < paths.n_paths(); ++n) {
        os << n;
        for (int m = 0; m <= paths.grid.M; ++m) os << ',' << format_double(paths.values(n, m));
        os << "\n";
    }
}

PathSet read_paths_csv(std::istream& is, const TimeGrid& grid) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_paths_csv: empty input");

    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) { // path_index column
                first = false;
                continue;
            }
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{})
                throw std::runtime_error("read_paths_csv: bad number '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != static_cast<std::size_t>(grid.M) + 1)
            throw std::runtime_error("read_paths_csv: row has " + std::to_string(row.size()) +
                                     " values, expected " + std::to_string(grid.M + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("read_paths_csv: no data rows");

    PathSet ps;
    ps.grid = grid;
    ps.values.resize(static_cast<Eigen::Index>(rows.size()), grid.M + 1);
    for (std::size_t n = 0; n < rows.size(); ++n)
        for (int m = 0; m <= grid.M; ++m) ps.values(static_cast<Eigen::Index>(n), m) = rows[n][m];
    return ps;
}

void write_scan_csv(std::ostream& os, const ConditionScan& scan) {
    os << "t,kappa,ln_t,ln_kappa,is_infinite\n";
    for (std::size_t i = 0; i < scan.t.size(); ++i) {
        const double t = scan.t[i];
        const double k = scan.kappa[i];
        if (std::isfinite(k)) {
            os << format_double(t) << ',' << format_double(k) << ',' << format_double(std::log(t))
               << ',' << format_double(std::log(k)) << ",false\n";
        } else {
            os << format_double(t) << ",," << format_double(std::log(t)) << ",,true\n";
        }
    }
}

} // namespace lsm
