#pragma once

#include <string>
#include <vector>

#include "hcsl/dag.hpp"
#include "hcsl/dataset.hpp"
#include "hcsl/metrics.hpp"
#include "hcsl/synth.hpp"

namespace hcsl {

// JSON serialization for every artifact the CLI reads or writes. Files are
// emitted with sorted keys and 2-space indentation, so identical values give
// byte-identical files. Read functions raise DataError with the path on
// missing files or malformed content.

void write_dag_json(const Dag& g, const std::string& path);
Dag read_dag_json(const std::string& path);

void write_ordering_json(const Ordering& o, const std::string& path);
Ordering read_ordering_json(const std::string& path);

void write_model_json(const HcmModel& m, const std::string& path);
HcmModel read_model_json(const std::string& path);

void write_scores_json(const Scores& s, const std::string& path);
Scores read_scores_json(const std::string& path);

// d x d p-value matrix (row = tail, column = head, 0 where no test ran) as
// CSV with one column per head node, named after the dataset's columns.
void write_pvalues_csv(const std::vector<double>& pvalues,
                       const std::vector<std::string>& names,
                       const std::string& path);
std::vector<double> read_pvalues_csv(const std::string& path);

}  // namespace hcsl
