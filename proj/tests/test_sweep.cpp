#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "ncmimo/errors.hpp"
#include "ncmimo/sweep.hpp"

using namespace ncmimo;

namespace
{
std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

std::vector<std::string> cells_of(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::string sweep_text(const std::string& config, int threads = 1)
{
    std::ostringstream os;
    run_sweep(parse_config(config), os, threads);
    return os.str();
}
} // namespace

TEST_CASE("minimal config gets defaults")
{
    const auto cfg = parse_config("[iid]\nr = 1\nsnr = 0.001\nA = 10\n");
    CHECK(cfg.quantity == Quantity::Iid);
    CHECK(cfg.seed == 1);
    CHECK(cfg.n_samples == 100000);
    CHECK(cfg.output_path == "-");
    CHECK(cfg.row_count() == 1);
}

TEST_CASE("grid syntax")
{
    const auto cfg = parse_config("seed = 4\n[exponent]\nt = 1\nr = 2\nl = 100\nsnr = logspace(-3, -1, 3)\n"
                                  "R = linspace(0, 1, 5) # comment\n");
    CHECK(cfg.seed == 4);
    REQUIRE(cfg.grid("snr") != nullptr);
    CHECK((*cfg.grid("snr"))[0] == doctest::Approx(1e-3));
    CHECK((*cfg.grid("snr"))[2] == doctest::Approx(0.1));
    CHECK(cfg.grid("R")->size() == 5);
    CHECK(cfg.grid("nu") == nullptr);
    CHECK(cfg.row_count() == 15);
}

TEST_CASE("config rejections")
{
    auto message = [](const std::string& text) {
        try
        {
            parse_config(text, "cfg");
        }
        catch (const ConfigError& e)
        {
            return std::string(e.what());
        }
        return std::string("accepted");
    };
    CHECK(message("[capacity]\nt = 1\nr = 1\nl = 10\nsnr_db = -10\n").find("unknown key 'snr_db'") !=
          std::string::npos);
    CHECK(message("[capacity]\nt = 1\nr = 1\nl = 10\nsnr_db = -10\n").find("cfg:5") != std::string::npos);
    CHECK(message("[capacity]\nt = 1\nr = 1\nl = 10\n").find("missing grid 'snr'") != std::string::npos);
    CHECK(message("[capacity]\nt = 1.5\nr = 1\nl = 10\nsnr = 0.1\n").find("positive integers") != std::string::npos);
    CHECK(message("[exponent]\nt = 1\nr = 1\nnu = 1\nl = 10\nsnr = 0.1\nR = 1\n").find("only one of") !=
          std::string::npos);
    CHECK(message("[capacity]\nt = 1\nr = 1\nl = 10\nsnr = 0.1, abc\n").find("cfg:5") != std::string::npos);
    CHECK(message("[nope]\n").find("unknown section") != std::string::npos);
    CHECK(message("seed = 1\n").find("no section") != std::string::npos);
    CHECK(message("colour = red\n[iid]\n").find("unknown key 'colour'") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/sweep.cfg"), ConfigError);
}

TEST_CASE("row cap")
{
    const std::string text = "[capacity]\nt = 1, 2\nr = 1, 2\nl = 10\nsnr = 0.1, 0.2\n";
    setenv("NCMIMO_ROW_CAP", "5", 1);
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("above the cap"), ConfigError);
    setenv("NCMIMO_ROW_CAP", "8", 1);
    CHECK(parse_config(text).row_count() == 8);
    unsetenv("NCMIMO_ROW_CAP");
    CHECK(row_cap() == 1000000);
}

TEST_CASE("capacity sweep shape and order")
{
    const auto out = lines_of(sweep_text("[capacity]\nt = 1\nr = 1\nl = 10, 1000\nsnr = 0.01, 0.02, 0.03\n"));
    REQUIRE(out.size() == 7);
    CHECK(out[0].rfind("t,r,l,snr,linear", 0) == 0);
    CHECK(out[0].substr(out[0].size() - 6) == ",error");
    // Last grid varies fastest.
    CHECK(cells_of(out[1])[2] == "10");
    CHECK(cells_of(out[1])[3] == "0.01");
    CHECK(cells_of(out[2])[3] == "0.02");
    CHECK(cells_of(out[4])[2] == "1000");
    for (std::size_t i = 1; i < out.size(); ++i)
        CHECK(cells_of(out[i]).back().empty());
}

TEST_CASE("exponent column is nonincreasing down the file")
{
    const auto out = lines_of(sweep_text("[exponent]\nt = 1\nr = 1\nnu = 1\nsnr = 0.01\nR = linspace(0, 24.75, 60)\n"));
    const auto header = cells_of(out[0]);
    std::size_t col = 0;
    while (header[col] != "E_r")
        ++col;
    double prev = INFINITY;
    for (std::size_t i = 1; i < out.size(); ++i)
    {
        const double e = std::stod(cells_of(out[i])[col]);
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
}

TEST_CASE("per-row errors do not stop the sweep")
{
    std::ostringstream os;
    const auto summary = run_sweep(parse_config("[outage]\nt = 2\nr = 1\nl = 2, 50\nsnr = 0.1\nR = 1\n"), os);
    CHECK(summary.rows == 2);
    CHECK(summary.error_rows == 1);
    REQUIRE(summary.failures.size() == 1);
    CHECK(summary.failures[0].first == 0);
    const auto out = lines_of(os.str());
    CHECK(cells_of(out[1]).back().find("training needs l > t") != std::string::npos);
    CHECK(cells_of(out[2]).back().empty());
    CHECK(cells_of(out[1]).size() == cells_of(out[0]).size());
}

TEST_CASE("sweeps are deterministic across runs and workers")
{
    const std::string text = "seed = 3\nn_samples = 5000\n[oracle-check]\nt = 1, 2\nr = 1, 2\nsnr = 0.05\n";
    const auto a = sweep_text(text, 1);
    CHECK(a == sweep_text(text, 1));
    CHECK(a == sweep_text(text, 4));
    const std::string reseeded = "seed = 4\nn_samples = 5000\n[oracle-check]\nt = 1, 2\nr = 1, 2\nsnr = 0.05\n";
    CHECK(a != sweep_text(reseeded, 1));
}

TEST_CASE("numbers round-trip through the CSV text")
{
    for (double x : {0.1, 1.0 / 3.0, 2.6026896854443837, 1e-300, -7.25e12, 0.0, 123456789.0})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(0.5) == "0.5");
}
