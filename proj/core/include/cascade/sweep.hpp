#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cascade/propagate.hpp"

namespace cascade {

// Worker count: CASCADE_THREADS when set to a positive integer, else the
// hardware concurrency.
int sweep_thread_count();

// Generic parallel map over row indices.  Rows are claimed work-stealing
// style but stored by input index, so the table is bitwise independent of
// scheduling; a throwing row records its message and fills with NaN without
// aborting the rest.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> errors;  // empty string = row ok

    bool all_ok() const;
};

SweepTable sweep_map(std::vector<std::string> columns, int n_rows,
                     const std::function<std::vector<double>(int)>& row_fn);

// One trajectory per parameter value; the factory builds each model from the
// swept parameter.  Results ordered by input index, never by completion.
struct ParameterSweep {
    std::function<LindbladModel(double)> model_factory;
    std::vector<double> parameters;
    QuantumState initial;
    PropagateOptions options;
    std::vector<Observable> observables;
};

struct SweepRow {
    double parameter = 0.0;
    Trajectory trajectory;
    std::string error;  // empty = ok
};

std::vector<SweepRow> sweep(const ParameterSweep& spec);

} // namespace cascade
