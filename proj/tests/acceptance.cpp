// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance            all ten criteria
//   acceptance --only N   a single criterion (used by ctest)
//   acceptance -v         per-cell detail under each line

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncmimo/check.hpp"

using namespace ncmimo;

namespace
{
// Criterion 10 also covers the full `check` suite: its printed table must be
// identical with one and with four workers.
CriterionResult full_determinism(const CheckOptions& opt)
{
    CriterionResult res = check_determinism(opt);
    std::string tables[2];
    const int threads[2] = {1, 4};
    for (int i = 0; i < 2; ++i)
    {
        CheckOptions o = opt;
        o.threads = threads[i];
        std::vector<CriterionResult> suite;
        for (auto* fn : {check_coherent_expansion, check_sanity_anchors, check_e0_bound_direction,
                         check_exponent_structure, check_outage_oracle, check_diversity_slopes,
                         check_onoff_agreement, check_m_star_sandwich, check_capacity_identities})
            suite.push_back(fn(o));
        std::ostringstream os;
        print_check_table(suite, os, true);
        tables[i] = os.str();
    }
    const bool same = tables[0] == tables[1];
    res.details.push_back(std::string("check table, 1 vs 4 workers: ") + (same ? "identical" : "DIFFERENT"));
    res.pass = res.pass && same;
    res.summary += same ? "; check table identical for 1/4 workers" : "; check table DIFFERS between 1/4 workers";
    return res;
}
} // namespace

int main(int argc, char** argv)
{
    int only = 0;
    bool verbose = false;
    for (int i = 1; i < argc; ++i)
    {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "-v") == 0)
            verbose = true;
        else
        {
            std::fprintf(stderr, "usage: %s [--only N] [-v]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > 10)
    {
        std::fprintf(stderr, "criterion must be in 1..10\n");
        return 2;
    }

    const CheckOptions opt;
    const std::vector<std::function<CriterionResult(const CheckOptions&)>> criteria{
        check_coherent_expansion, check_sanity_anchors,   check_e0_bound_direction, check_exponent_structure,
        check_outage_oracle,      check_diversity_slopes, check_onoff_agreement,    check_m_star_sandwich,
        check_capacity_identities, full_determinism};

    std::vector<CriterionResult> results;
    for (int id = 1; id <= 10; ++id)
        if (only == 0 || only == id)
            results.push_back(criteria[id - 1](opt));

    // Always show the detail when running a single criterion; ctest logs it on failure.
    print_check_table(results, std::cout, verbose || only != 0);
    for (const auto& r : results)
        if (!r.pass)
            return 1;
    return 0;
}
