#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ncmimo/check.hpp"
#include "ncmimo/errors.hpp"
#include "ncmimo/sweep.hpp"

namespace
{
int run_sweep_command(const std::string& config_path, std::optional<std::uint64_t> seed,
                      std::optional<std::string> out_path, int threads)
{
    ncmimo::SweepConfig cfg = ncmimo::load_config(config_path);
    if (seed)
        cfg.seed = *seed;
    if (out_path)
        cfg.output_path = *out_path;

    ncmimo::SweepSummary summary;
    if (cfg.output_path == "-")
        summary = ncmimo::run_sweep(cfg, std::cout, threads);
    else
    {
        std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ncmimo::ConfigError("cannot open output '" + cfg.output_path + "'");
        summary = ncmimo::run_sweep(cfg, out, threads);
        out.flush();
        if (!out)
            throw ncmimo::ConfigError("write to '" + cfg.output_path + "' failed");
    }

    std::fprintf(stderr, "sweep [%s]: %lld rows, %lld errors, seed %llu, %.3f s\n", ncmimo::quantity_name(cfg.quantity),
                 static_cast<long long>(summary.rows), static_cast<long long>(summary.error_rows),
                 static_cast<unsigned long long>(summary.seed), summary.elapsed_seconds);
    for (const auto& [row, message] : summary.failures)
        std::fprintf(stderr, "  row %lld: %s\n", static_cast<long long>(row), message.c_str());
    return summary.error_rows == 0 ? 0 : 1;
}
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Wideband non-coherent MIMO: closed forms, sweeps and oracle checks"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "Evaluate one quantity over a parameter grid and write CSV");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_path;
    int threads = 1;
    sweep->add_option("config", config_path, "Sweep config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--seed", seed, "Override the config seed");
    sweep->add_option("--out", out_path, "Override the output path ('-' for stdout)");
    sweep->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));

    auto* check = app.add_subcommand("check", "Run the closed-form vs oracle suite and print a pass/fail table");
    ncmimo::CheckOptions check_opt;
    bool verbose = false;
    check->add_option("--seed", check_opt.seed, "Oracle seed");
    check->add_option("--threads", check_opt.threads, "Worker threads")->check(CLI::Range(1, 256));
    check->add_flag("-v,--verbose", verbose, "Print per-cell details");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sweep)
            return run_sweep_command(config_path, seed, out_path, threads);
        const auto results = ncmimo::run_checks(check_opt);
        ncmimo::print_check_table(results, std::cout, verbose);
        for (const auto& r : results)
            if (!r.pass)
                return 1;
        return 0;
    }
    catch (const ncmimo::ConfigError& e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const ncmimo::Error& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
