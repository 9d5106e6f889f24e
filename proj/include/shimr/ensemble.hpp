// Monte-Carlo harness: independent runs with per-run derived seeds, executed
// on a worker pool. Results are identical for any parallelism degree.
#ifndef SHIMR_ENSEMBLE_HPP
#define SHIMR_ENSEMBLE_HPP

#include <vector>

#include "shimr/engine.hpp"
#include "shimr/model.hpp"

namespace shimr {

// Runs cfg.runs simulations with run indices 0..runs-1. parallelism <= 0
// means one worker per hardware thread. Results come back in run-index order.
std::vector<RunResult> run_ensemble(const RunConfig& cfg, int parallelism = 0);

}  // namespace shimr

#endif  // SHIMR_ENSEMBLE_HPP
