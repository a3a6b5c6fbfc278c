#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ncmimo
{

enum class Quantity
{
    Capacity,
    Sublinear,
    Exponent,
    Outage,
    Iid,
    OracleCheck
};

const char* quantity_name(Quantity q);

struct Grid
{
    std::string key;
    std::vector<double> values;
};

/**
 * Flat key = value config with one typed section:
 *
 *   seed = 7
 *   n_samples = 100000
 *   output = out.csv
 *   [capacity]
 *   t = 1, 2
 *   snr = logspace(-3, -1, 5)
 *
 * Grids are comma-separated numbers, linspace(a, b, n) or logspace(e0, e1, n)
 * (base 10). SNR is always linear.
 */
struct SweepConfig
{
    Quantity quantity = Quantity::Capacity;
    std::vector<Grid> grids; ///< canonical order for the quantity, not file order
    std::uint64_t seed = 1;
    std::int64_t n_samples = 100000;
    std::string output_path = "-";

    std::int64_t row_count() const;
    const std::vector<double>* grid(const std::string& key) const;
};

/// Default 1e6, overridden by NCMIMO_ROW_CAP.
std::int64_t row_cap();

SweepConfig parse_config(const std::string& text, const std::string& origin = "<config>");
SweepConfig load_config(const std::string& path);

struct SweepSummary
{
    std::int64_t rows = 0;
    std::int64_t error_rows = 0;
    double elapsed_seconds = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::int64_t, std::string>> failures; ///< (row index, message)
};

/// Writes the header and one CSV row per grid point in lexicographic order.
SweepSummary run_sweep(const SweepConfig& config, std::ostream& csv, int threads = 1);

/// Locale-independent %.17g; parses back to the identical double.
std::string format_double(double x);

} // namespace ncmimo
