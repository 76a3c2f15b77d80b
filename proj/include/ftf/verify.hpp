#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftf/curve_spec.hpp"

namespace ftf {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    double measured = 0.0;   // worst residual or the measured quantity
    double threshold = 0.0;  // what `measured` is compared against
    double seconds = 0.0;
    std::string detail;
};

struct SuiteConfig {
    std::uint64_t seed = 1;
    int samples = 2048;
    int lift_steps = 4096;
    int grid_n = 48;
    int refine_iters = 40;
    double tol = 1e-2;  // diameter tolerance for the "reaches pi" checks
};

using CheckCallback = std::function<void(const CheckResult&)>;

// The ten acceptance criteria, in order. Each check catches its own errors
// and reports them as failures.
std::vector<CheckResult> run_acceptance_suite(const SuiteConfig& cfg, const CheckCallback& on_result = {});

// Checks on one user-supplied pair: admissibility, flatness, mean curvature,
// diameter and, when the shells allow it, the rolling certificate. If the pair is
// not admissible only that check fails and the rest are skipped.
std::vector<CheckResult> verify_pair(const PairSpec& spec, const SuiteConfig& cfg, const CheckCallback& on_result = {});

nlohmann::json to_json(const CheckResult& r);

}  // namespace ftf
