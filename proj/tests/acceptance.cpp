// One line per acceptance criterion; exit status 1 if any fails.

#include "ginibre/validation.hpp"

#include <cstdio>
#include <thread>

using namespace ginibre::validation;

int main() {
    Options opt;
    opt.mc_trials = 100000;
    opt.workers = std::max(1u, std::thread::hardware_concurrency());

    struct Criterion {
        const char* title;
        CheckResult (*run)(const Options&);
    };
    const Criterion criteria[] = {
        {"jpdf normalization (Andreief determinant)", andreief_normalization},
        {"density norm equals N", density_norm},
        {"closed-form vs numerical moments", moments},
        {"biorthogonality of p_i and chi_j", biorthogonality},
        {"reproducing kernel", reproducing_kernel},
        {"Meijer G identity suite", identity_suite},
        {"Monte Carlo histogram vs density", monte_carlo_histogram},
        {"rescaled density vs limit laws (L1)", limit_l1},
        {"ergodic mutual information", mutual_information},
        {"resolvent consistency", resolvent},
    };

    int failed = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const CheckResult r = c.run(opt);
        if (!r.passed) ++failed;
        std::printf("%s %2d  %-42s worst %.3g (limit %.3g)  %.2f s", r.passed ? "PASS" : "FAIL", index, c.title,
                    r.worst_error, r.tolerance, r.seconds);
        if (r.time_limit > 0) std::printf(" (limit %.0f s)", r.time_limit);
        std::printf("  [%s]\n", r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
