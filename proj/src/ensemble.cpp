#include "shimr/ensemble.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shimr {

std::vector<RunResult> run_ensemble(const RunConfig& cfg, int parallelism) {
    const int runs = cfg.runs;
    int workers = parallelism > 0 ? parallelism
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers > runs) workers = runs;

    std::vector<RunResult> results(runs);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            int i = next.fetch_add(1);
            if (i >= runs) break;
            try {
                results[i] = run_simulation(cfg, static_cast<std::uint64_t>(i));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace shimr
