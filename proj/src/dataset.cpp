#include "hcsl/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>

#include "hcsl/errors.hpp"
#include "hcsl/mathutil.hpp"

namespace hcsl {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(trim(std::string_view(line).substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !cell.empty();
}

}  // namespace

Dataset Dataset::zeros(std::size_t n, std::size_t d) {
    Dataset ds;
    ds.n = n;
    ds.d = d;
    ds.values.assign(n * d, 0.0);
    ds.names.resize(d);
    for (std::size_t j = 0; j < d; ++j) ds.names[j] = "col" + std::to_string(j);
    return ds;
}

Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);

    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw DataError(path + ": row " + std::to_string(lineno) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(width));
        std::vector<double> vals(cells.size());
        bool numeric = true;
        for (std::size_t j = 0; j < cells.size(); ++j)
            if (!parse_double(cells[j], vals[j])) {
                numeric = false;
                break;
            }
        if (!numeric) {
            if (rows.empty() && names.empty()) {
                names.assign(cells.begin(), cells.end());
                continue;
            }
            throw DataError(path + ": row " + std::to_string(lineno) +
                            " contains a non-numeric field");
        }
        for (std::size_t j = 0; j < vals.size(); ++j)
            if (!std::isfinite(vals[j]))
                throw DataError(path + ": row " + std::to_string(lineno) +
                                ", column " + std::to_string(j + 1) +
                                " is not finite");
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw DataError(path + ": no data rows");

    Dataset ds = Dataset::zeros(rows.size(), width);
    if (!names.empty()) ds.names = names;
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < width; ++j) ds.col(j)[r] = rows[r][j];
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write dataset file: " + path);
    for (std::size_t j = 0; j < ds.d; ++j)
        out << (j ? "," : "") << ds.names[j];
    out << '\n';
    char buf[40];
    for (std::size_t r = 0; r < ds.n; ++r) {
        std::string line;
        for (std::size_t j = 0; j < ds.d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.col(j)[r]);
            if (j) line += ',';
            line += buf;
        }
        line += '\n';
        out << line;
    }
    if (!out) throw DataError("write failed: " + path);
}

Dataset standardize(const Dataset& ds) {
    Dataset out = ds;
    for (std::size_t j = 0; j < ds.d; ++j) {
        const std::span<const double> col(ds.col(j), ds.n);
        const double m = mean(col);
        const double v = variance(col);
        if (v <= 0.0)
            throw DataError("standardize: column " + std::to_string(j) +
                            " (" + ds.names[j] + ") is constant");
        const double s = std::sqrt(v);
        double* o = out.col(j);
        for (std::size_t r = 0; r < ds.n; ++r) o[r] = (col[r] - m) / s;
    }
    return out;
}

}  // namespace hcsl
