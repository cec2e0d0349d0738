#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hcsl {

// Numeric data matrix, stored column-major so per-column kernels run on
// contiguous memory.
struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<std::string> names;  // one per column
    std::vector<double> values;      // size n*d, column j at [j*n, (j+1)*n)

    double* col(std::size_t j) { return values.data() + j * n; }
    const double* col(std::size_t j) const { return values.data() + j * n; }

    static Dataset zeros(std::size_t n, std::size_t d);
};

// Reads a comma-separated numeric matrix. A single leading header row is
// detected (any cell that does not parse as a number). Ragged rows, empty
// files, unparseable or non-finite cells raise DataError naming the
// 1-based file row (and column where applicable).
Dataset read_csv(const std::string& path);

// Writes with a header row; doubles are rendered with %.17g so write/read
// round-trips exactly and identical data gives byte-identical files.
void write_csv(const Dataset& ds, const std::string& path);

// Per-column (x - mean) / sd with the biased (1/n) standard deviation.
// Raises DataError on a constant column.
Dataset standardize(const Dataset& ds);

}  // namespace hcsl
