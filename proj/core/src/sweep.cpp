#include "cascade/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <limits>
#include <thread>

namespace cascade {

int sweep_thread_count() {
    if (const char* env = std::getenv("CASCADE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

bool SweepTable::all_ok() const {
    for (const auto& e : errors)
        if (!e.empty()) return false;
    return true;
}

namespace {

void run_workers(int n_rows, const std::function<void(int)>& body) {
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_rows) return;
            body(i);
        }
    };
    const int workers = std::min(sweep_thread_count(), n_rows > 1 ? n_rows : 1);
    if (workers <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

}  // namespace

SweepTable sweep_map(std::vector<std::string> columns, int n_rows,
                     const std::function<std::vector<double>(int)>& row_fn) {
    SweepTable out;
    out.columns = std::move(columns);
    out.rows.assign(static_cast<size_t>(std::max(n_rows, 0)), {});
    out.errors.assign(out.rows.size(), "");
    run_workers(n_rows, [&](int i) {
        try {
            out.rows[i] = row_fn(i);
            if (out.rows[i].size() != out.columns.size())
                throw std::runtime_error("row width does not match the declared columns");
        } catch (const std::exception& e) {
            out.errors[i] = e.what();
            out.rows[i].assign(out.columns.size(), std::numeric_limits<double>::quiet_NaN());
        }
    });
    return out;
}

std::vector<SweepRow> sweep(const ParameterSweep& spec) {
    std::vector<SweepRow> rows(spec.parameters.size());
    run_workers(static_cast<int>(spec.parameters.size()), [&](int i) {
        rows[i].parameter = spec.parameters[i];
        try {
            const LindbladModel model = spec.model_factory(spec.parameters[i]);
            rows[i].trajectory = propagate(model, spec.initial, spec.options, spec.observables);
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });
    return rows;
}

} // namespace cascade
