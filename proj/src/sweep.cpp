#include "ncmimo/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "ncmimo/capacity.hpp"
#include "ncmimo/errors.hpp"
#include "ncmimo/iid_extreme.hpp"
#include "ncmimo/oracle.hpp"
#include "ncmimo/reliability.hpp"

namespace ncmimo
{
namespace
{
// Grid keys of one section. A choice group lists keys of which exactly one must appear.
struct SectionSchema
{
    Quantity quantity;
    const char* name;
    std::vector<std::vector<std::string>> slots;
    std::vector<std::string> integer_keys;
};

const std::vector<SectionSchema>& schemas()
{
    static const std::vector<SectionSchema> all{
        {Quantity::Capacity, "capacity", {{"t"}, {"r"}, {"l"}, {"snr"}}, {"t", "r", "l"}},
        {Quantity::Sublinear, "sublinear", {{"t"}, {"r"}, {"snr"}, {"alpha", "l"}}, {"t", "r"}},
        {Quantity::Exponent, "exponent", {{"t"}, {"r"}, {"nu", "l"}, {"snr"}, {"R"}}, {"t", "r"}},
        {Quantity::Outage, "outage", {{"t"}, {"r"}, {"nu", "l"}, {"snr"}, {"R", "kappa"}}, {"t", "r"}},
        {Quantity::Iid, "iid", {{"r"}, {"snr"}, {"A"}}, {"r"}},
        {Quantity::OracleCheck, "oracle-check", {{"t"}, {"r"}, {"snr"}}, {"t", "r"}},
    };
    return all;
}

const SectionSchema& schema_for(Quantity q)
{
    for (const auto& s : schemas())
        if (s.quantity == q)
            return s;
    throw ConfigError("unknown quantity");
}

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message)
{
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

double parse_number(const std::string& text, const std::string& origin, int line)
{
    const std::string s = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        fail(origin, line, "not a number: '" + s + "'");
    if (!std::isfinite(value))
        fail(origin, line, "non-finite value: '" + s + "'");
    return value;
}

std::vector<std::string> split_commas(const std::string& s)
{
    std::vector<std::string> parts;
    std::string current;
    for (char c : s)
    {
        if (c == ',')
        {
            parts.push_back(current);
            current.clear();
        }
        else
            current += c;
    }
    parts.push_back(current);
    return parts;
}

std::vector<double> parse_grid(const std::string& text, const std::string& origin, int line)
{
    const std::string s = trim(text);
    if (s.empty())
        fail(origin, line, "empty grid");
    for (const char* fn : {"linspace", "logspace"})
    {
        const std::string prefix = std::string(fn) + "(";
        if (s.rfind(prefix, 0) != 0)
            continue;
        if (s.back() != ')')
            fail(origin, line, "unterminated " + std::string(fn) + "(...)");
        const auto args = split_commas(s.substr(prefix.size(), s.size() - prefix.size() - 1));
        if (args.size() != 3)
            fail(origin, line, std::string(fn) + " takes (start, stop, count)");
        const double a = parse_number(args[0], origin, line);
        const double b = parse_number(args[1], origin, line);
        const double count = parse_number(args[2], origin, line);
        if (count < 1 || count != std::floor(count) || count > 1e6)
            fail(origin, line, "point count must be an integer in [1, 1e6]");
        const auto n = static_cast<int>(count);
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i)
        {
            const double x = n == 1 ? a : a + (b - a) * i / (n - 1);
            out[i] = fn[1] == 'i' ? x : std::pow(10.0, x);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& part : split_commas(s))
        out.push_back(parse_number(part, origin, line));
    return out;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& origin, int line, const char* what)
{
    const std::string s = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        fail(origin, line, std::string(what) + " must be a nonnegative integer, got '" + s + "'");
    return value;
}

// Per-row values in canonical key order; lookup by key.
class Point
{
public:
    Point(const std::vector<Grid>& grids, std::int64_t index) : grids_(grids), values_(grids.size())
    {
        for (std::size_t k = grids.size(); k-- > 0;)
        {
            const auto n = static_cast<std::int64_t>(grids[k].values.size());
            values_[k] = grids[k].values[index % n];
            index /= n;
        }
    }

    bool has(const char* key) const
    {
        return std::any_of(grids_.begin(), grids_.end(), [&](const Grid& g) { return g.key == key; });
    }

    double get(const char* key) const
    {
        for (std::size_t k = 0; k < grids_.size(); ++k)
            if (grids_[k].key == key)
                return values_[k];
        throw ConfigError(std::string("missing grid ") + key);
    }

    int get_int(const char* key) const { return static_cast<int>(get(key)); }

    const std::vector<double>& values() const { return values_; }

private:
    const std::vector<Grid>& grids_;
    std::vector<double> values_;
};

struct RowWriter
{
    std::vector<std::string> cells;

    void num(double x) { cells.push_back(format_double(x)); }
    void text(const std::string& s) { cells.push_back(s); }
    void flag(bool b) { cells.push_back(b ? "1" : "0"); }
};

WidebandLink link_for(const Point& p)
{
    const int t = p.get_int("t");
    const int r = p.get_int("r");
    const double snr = p.get("snr");
    if (p.has("nu"))
        return link_from_nu(t, r, p.get("nu"), snr);
    return {t, r, regime_from_coherence_length(t, r, p.get("l"), snr)};
}

std::vector<std::string> computed_columns(Quantity q)
{
    switch (q)
    {
    case Quantity::Capacity:
        return {"linear", "sublinear", "coherent_total", "gaussian_lb", "lb_negative", "dropped_remainder"};
    case Quantity::Sublinear:
        return {"linear", "sublinear", "energy_ratio", "log_energy_ratio", "log_energy_approx", "dropped_remainder"};
    case Quantity::Exponent:
        return {"l_real", "alpha_eff", "delta", "snr_b", "rho", "E_r", "region", "block_error_bound", "r_critical",
                "r_cutoff", "c_block_training_lb", "c_block", "asymptotics_binding", "dropped_remainder"};
    case Quantity::Outage:
        return {"l_real", "rate", "f_star", "outage", "delta_outage", "block_error_bound", "region"};
    case Quantity::Iid:
        return {"omega",       "divergence", "zeta_star", "mi_asymptotic", "validity",     "mi_quadrature",
                "quad_error",  "surrogate_M", "m_star",   "m_lower",       "m_upper",      "bracket_lower",
                "bracket_upper", "dropped_remainder"};
    case Quantity::OracleCheck:
        return {"expansion_total", "mc_mean", "std_error", "ci99_low", "ci99_high", "n_samples", "gap"};
    }
    return {};
}

void compute_row(const SweepConfig& cfg, const Point& p, std::int64_t index, RowWriter& w)
{
    switch (cfg.quantity)
    {
    case Quantity::Capacity: {
        const ChannelDims dims{p.get_int("t"), p.get_int("r"), p.get_int("l")};
        const double snr = p.get("snr");
        const auto c = coherent_expansion(dims, snr);
        const auto lb = gaussian_lower_bound(dims, snr);
        w.num(c.linear);
        w.num(c.sublinear);
        w.num(c.total);
        w.num(lb.value);
        w.flag(lb.negative);
        w.text(c.dropped_remainder);
        return;
    }
    case Quantity::Sublinear: {
        const int t = p.get_int("t");
        const int r = p.get_int("r");
        const double snr = p.get("snr");
        SublinearInput in;
        if (p.has("alpha"))
            in.alpha = p.get("alpha");
        else
            in.coherence = p.get("l");
        const double delta = sublinear_term(t, r, snr, in);
        const auto e = energy_per_nat(r, snr, delta);
        w.num(r * snr);
        w.num(delta);
        w.num(e.ratio);
        w.num(e.log_ratio);
        w.num(e.log_approx);
        w.text(p.has("alpha") ? "O(snr^(1+alpha+eps))" : "o(snr/sqrt(l))");
        return;
    }
    case Quantity::Exponent: {
        const auto link = link_for(p);
        const double rate = p.get("R");
        const auto e = error_exponent(link, rate);
        const auto lm = rate_landmarks(link);
        w.num(link.regime.coherence);
        w.num(link.regime.alpha_eff);
        w.num(link.regime.delta);
        w.num(link.regime.snr_b);
        w.num(e.rho);
        w.num(e.value);
        w.text(region_name(e.region));
        w.num(block_error_bound(link, rate).bound);
        w.num(lm.r_critical);
        w.num(lm.r_cutoff);
        w.num(lm.c_block_training_lb);
        w.num(lm.c_block);
        w.flag(e.asymptotics_binding);
        w.text(e.dropped_remainder);
        return;
    }
    case Quantity::Outage: {
        const auto link = link_for(p);
        const double l = link.regime.coherence;
        const double rate = p.has("R") ? p.get("R") : l * link.r * std::pow(link.regime.snr, p.get("kappa"));
        const auto o = outage_probability(link, rate);
        const auto b = block_error_bound(link, rate);
        w.num(l);
        w.num(rate);
        w.num(o.f_star);
        w.num(o.probability);
        w.num(o.delta_times_outage);
        w.num(b.bound);
        w.text(region_name(b.region));
        return;
    }
    case Quantity::Iid: {
        const int r = p.get_int("r");
        const double snr = p.get("snr");
        const double A = p.get("A");
        const auto s = onoff_building_blocks(r, snr, A);
        const auto asym = onoff_mi_asymptotic(r, snr, A);
        const auto quad = onoff_mi_quadrature(r, snr, A, 1e-8);
        const auto m = m_star(r, snr);
        const auto bracket = iid_capacity_bracket(r, snr);
        w.num(s.omega);
        w.num(s.divergence);
        w.num(s.zeta_star);
        w.num(asym.value);
        w.num(asym.validity);
        w.num(quad.value);
        w.num(quad.error_estimate);
        w.num(surrogate_M(r, snr, A));
        w.num(m.m_star);
        w.num(m.lower_bound);
        w.num(m.upper_bound);
        w.num(bracket.lower);
        w.num(bracket.upper);
        w.text("o(snr^2)");
        return;
    }
    case Quantity::OracleCheck: {
        const ChannelDims dims{p.get_int("t"), p.get_int("r"), 1};
        const double snr = p.get("snr");
        const RngStream rng(cfg.seed, static_cast<std::uint32_t>(index));
        const auto mc = mc_coherent_mi(dims, snr, cfg.n_samples, rng);
        const double expansion = coherent_expansion(dims, snr).total;
        w.num(expansion);
        w.num(mc.mean);
        w.num(mc.std_error);
        w.num(mc.ci99_low);
        w.num(mc.ci99_high);
        w.num(static_cast<double>(mc.n_samples));
        w.num(mc.mean - expansion);
        return;
    }
    }
}

std::string csv_cell(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join(const std::vector<std::string>& cells)
{
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            line += ',';
        line += csv_cell(cells[i]);
    }
    return line + '\n';
}
} // namespace

const char* quantity_name(Quantity q) { return schema_for(q).name; }

std::int64_t SweepConfig::row_count() const
{
    std::int64_t rows = 1;
    for (const auto& g : grids)
    {
        const auto n = static_cast<std::int64_t>(g.values.size());
        if (n == 0)
            return 0;
        // Saturate instead of overflowing; anything this large is refused anyway.
        if (rows > std::numeric_limits<std::int64_t>::max() / n)
            return std::numeric_limits<std::int64_t>::max();
        rows *= n;
    }
    return rows;
}

const std::vector<double>* SweepConfig::grid(const std::string& key) const
{
    for (const auto& g : grids)
        if (g.key == key)
            return &g.values;
    return nullptr;
}

std::int64_t row_cap()
{
    const char* env = std::getenv("NCMIMO_ROW_CAP");
    if (env == nullptr || *env == '\0')
        return 1000000;
    std::int64_t cap = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || ptr != s.data() + s.size() || cap < 1)
        throw ConfigError("NCMIMO_ROW_CAP must be a positive integer, got '" + s + "'");
    return cap;
}

SweepConfig parse_config(const std::string& text, const std::string& origin)
{
    SweepConfig cfg;
    const SectionSchema* section = nullptr;
    std::map<std::string, std::pair<std::vector<double>, int>> raw;
    std::map<std::string, int> seen_top;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                fail(origin, lineno, "malformed section header");
            if (section != nullptr)
                fail(origin, lineno, "only one section is allowed per config");
            const std::string name = trim(line.substr(1, line.size() - 2));
            for (const auto& s : schemas())
                if (name == s.name)
                    section = &s;
            if (section == nullptr)
                fail(origin, lineno, "unknown section [" + name + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(origin, lineno, "missing key");

        if (section == nullptr)
        {
            if (seen_top.count(key))
                fail(origin, lineno, "duplicate key '" + key + "'");
            seen_top[key] = lineno;
            if (key == "seed")
                cfg.seed = parse_unsigned(value, origin, lineno, "seed");
            else if (key == "n_samples")
            {
                const auto n = parse_unsigned(value, origin, lineno, "n_samples");
                if (n < 1000 || n > 100000000)
                    fail(origin, lineno, "n_samples must lie in [1000, 1e8]");
                cfg.n_samples = static_cast<std::int64_t>(n);
            }
            else if (key == "output")
            {
                if (value.empty())
                    fail(origin, lineno, "output path is empty");
                cfg.output_path = value;
            }
            else
                fail(origin, lineno, "unknown key '" + key + "'");
            continue;
        }

        bool known = false;
        for (const auto& slot : section->slots)
            known = known || std::find(slot.begin(), slot.end(), key) != slot.end();
        if (!known)
            fail(origin, lineno, "unknown key '" + key + "' in [" + section->name + "]");
        if (raw.count(key))
            fail(origin, lineno, "duplicate key '" + key + "'");
        auto values = parse_grid(value, origin, lineno);
        if (std::find(section->integer_keys.begin(), section->integer_keys.end(), key) !=
            section->integer_keys.end())
            for (double v : values)
                if (v != std::floor(v) || v < 1 || v > 1e6)
                    fail(origin, lineno, "'" + key + "' must hold positive integers");
        raw[key] = {std::move(values), lineno};
    }

    if (section == nullptr)
        throw ConfigError(origin + ": no section; expected one of [capacity], [sublinear], [exponent], [outage], "
                                   "[iid], [oracle-check]");
    cfg.quantity = section->quantity;
    for (const auto& slot : section->slots)
    {
        std::vector<std::string> present;
        for (const auto& key : slot)
            if (raw.count(key))
                present.push_back(key);
        std::string names;
        for (const auto& key : slot)
            names += (names.empty() ? "'" : " or '") + key + "'";
        if (present.empty())
            throw ConfigError(origin + ": [" + section->name + "] is missing grid " + names);
        if (present.size() > 1)
            fail(origin, raw[present[1]].second, "[" + std::string(section->name) + "] takes only one of " + names);
        cfg.grids.push_back({present.front(), raw[present.front()].first});
    }

    const std::int64_t cap = row_cap();
    if (cfg.row_count() > cap)
        throw ConfigError(origin + ": grid has " + std::to_string(cfg.row_count()) + " rows, above the cap of " +
                          std::to_string(cap) + " (set NCMIMO_ROW_CAP to raise it)");
    return cfg;
}

SweepConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

SweepSummary run_sweep(const SweepConfig& config, std::ostream& csv, int threads)
{
    const auto start = std::chrono::steady_clock::now();
    const std::int64_t cap = row_cap();
    const std::int64_t rows = config.row_count();
    if (rows > cap)
        throw ConfigError("grid has " + std::to_string(rows) + " rows, above the cap of " + std::to_string(cap));

    std::vector<std::string> header;
    for (const auto& g : config.grids)
        header.push_back(g.key);
    const auto computed = computed_columns(config.quantity);
    header.insert(header.end(), computed.begin(), computed.end());
    header.push_back("error");
    csv << join(header);

    std::vector<std::string> lines(static_cast<std::size_t>(rows));
    std::vector<std::string> errors(static_cast<std::size_t>(rows));
    auto work = [&](std::int64_t i) {
        const Point p(config.grids, i);
        RowWriter w;
        for (double v : p.values())
            w.num(v);
        try
        {
            compute_row(config, p, i, w);
            w.text("");
        }
        catch (const Error& e)
        {
            w.cells.resize(p.values().size());
            w.cells.resize(header.size() - 1);
            w.text(e.what());
            errors[static_cast<std::size_t>(i)] = e.what();
        }
        lines[static_cast<std::size_t>(i)] = join(w.cells);
    };

    const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(rows, 1)));
    if (workers == 1)
        for (std::int64_t i = 0; i < rows; ++i)
            work(i);
    else
    {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        for (int k = 0; k < workers; ++k)
            pool.emplace_back([&] {
                for (std::int64_t i = next++; i < rows; i = next++)
                    work(i);
            });
        for (auto& th : pool)
            th.join();
    }

    SweepSummary summary;
    summary.rows = rows;
    summary.seed = config.seed;
    for (std::int64_t i = 0; i < rows; ++i)
    {
        csv << lines[static_cast<std::size_t>(i)];
        if (!errors[static_cast<std::size_t>(i)].empty())
        {
            ++summary.error_rows;
            summary.failures.emplace_back(i, errors[static_cast<std::size_t>(i)]);
        }
    }
    summary.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

} // namespace ncmimo
