#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ncmimo
{

struct CheckOptions
{
    std::uint64_t seed = 20061;
    int threads = 1;
};

struct CriterionResult
{
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;
    std::vector<std::string> details; ///< one line per failing or notable cell
};

// Each criterion is a self-contained closed-form vs oracle comparison.
CriterionResult check_coherent_expansion(const CheckOptions& opt);
CriterionResult check_sanity_anchors(const CheckOptions& opt);
CriterionResult check_e0_bound_direction(const CheckOptions& opt);
CriterionResult check_exponent_structure(const CheckOptions& opt);
CriterionResult check_outage_oracle(const CheckOptions& opt);
CriterionResult check_diversity_slopes(const CheckOptions& opt);
CriterionResult check_onoff_agreement(const CheckOptions& opt);
CriterionResult check_m_star_sandwich(const CheckOptions& opt);
CriterionResult check_capacity_identities(const CheckOptions& opt);
/// Sweeps and oracles repeated and across 1 and 4 workers must agree byte for byte.
CriterionResult check_determinism(const CheckOptions& opt);

std::vector<CriterionResult> run_checks(const CheckOptions& opt);

/// Fixed-format table; contains no timings so repeated runs compare equal.
void print_check_table(const std::vector<CriterionResult>& results, std::ostream& out, bool verbose);

} // namespace ncmimo
