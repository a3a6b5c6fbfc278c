#include "ncmimo/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "ncmimo/errors.hpp"

namespace ncmimo
{
namespace
{
constexpr std::int64_t kBlock = 4096;

struct Moments
{
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++count;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    void merge(const Moments& o)
    {
        if (o.count == 0)
            return;
        if (count == 0)
        {
            *this = o;
            return;
        }
        const double n = static_cast<double>(count + o.count);
        const double d = o.mean - mean;
        mean += d * o.count / n;
        m2 += o.m2 + d * d * static_cast<double>(count) * o.count / n;
        count += o.count;
    }

    double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
};

// Runs work(block_index) for every block on up to `threads` workers.
template <class Work>
void for_each_block(std::int64_t blocks, int threads, Work&& work)
{
    const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(blocks, 1)));
    if (workers == 1)
    {
        for (std::int64_t b = 0; b < blocks; ++b)
            work(b);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::int64_t b = next++; b < blocks; b = next++)
                work(b);
        });
    for (auto& th : pool)
        th.join();
}

// Streaming moments of sample(i) for i in [0, n), merged in block order.
template <class Sample>
Moments block_moments(std::int64_t n, int threads, Sample&& sample)
{
    const std::int64_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<Moments> partial(blocks);
    for_each_block(blocks, threads, [&](std::int64_t b) {
        Moments m;
        const std::int64_t end = std::min(n, (b + 1) * kBlock);
        for (std::int64_t i = b * kBlock; i < end; ++i)
            m.add(sample(i));
        partial[b] = m;
    });
    Moments total;
    for (const auto& m : partial)
        total.merge(m);
    return total;
}

void check_samples(std::int64_t n, std::int64_t minimum)
{
    if (n < minimum)
        throw DomainError("Monte Carlo oracle needs at least " + std::to_string(minimum) + " samples");
}

OracleEstimate mean_estimate(const Moments& m, const char* method)
{
    OracleEstimate e;
    e.mean = m.mean;
    e.n_samples = m.count;
    e.std_error = std::sqrt(m.variance() / m.count);
    e.ci99_low = e.mean - kZ99 * e.std_error;
    e.ci99_high = e.mean + kZ99 * e.std_error;
    e.method = method;
    return e;
}

double log_add_exp(double a, double b)
{
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}
} // namespace

OracleEstimate mc_coherent_mi(const ChannelDims& dims, double snr, std::int64_t n, const RngStream& rng,
                              int threads)
{
    dims.validate();
    check_samples(n, 1000);
    if (!(snr >= 0.0))
        throw DomainError("snr must be nonnegative");
    const double scale = snr / dims.t;
    const Moments m = block_moments(n, threads, [&](std::int64_t i) {
        auto s = rng.substream(static_cast<std::uint64_t>(i));
        return log_det_identity_plus_gram(sample_channel_matrix(dims, s), scale);
    });
    return mean_estimate(m, "mean");
}

OracleEstimate mc_e0_exact(const ChannelDims& dims, double snr_b, double rho, std::int64_t n, const RngStream& rng,
                           int threads)
{
    dims.validate();
    check_samples(n, 1000);
    if (!(rho >= 0.0 && rho <= 1.0))
        throw DomainError("rho must lie in [0, 1]");
    if (!(snr_b >= 0.0))
        throw DomainError("in-block SNR must be nonnegative");

    const double scale = snr_b / (dims.t * (1.0 + rho));
    const double power = -rho * dims.l;
    std::vector<double> values(static_cast<std::size_t>(n));
    const Moments m = block_moments(n, threads, [&](std::int64_t i) {
        auto s = rng.substream(static_cast<std::uint64_t>(i));
        const double v = std::exp(power * log_det_identity_plus_gram(sample_channel_matrix(dims, s), scale));
        values[static_cast<std::size_t>(i)] = v;
        return v;
    });

    OracleEstimate e;
    e.n_samples = n;
    e.mean = -std::log(m.mean);
    // Delta method: d(-log u) = du / u.
    e.std_error = std::sqrt(m.variance() / n) / m.mean;
    e.ci99_low = e.mean - kZ99 * e.std_error;
    e.ci99_high = e.mean + kZ99 * e.std_error;
    e.method = "delta-method";
    if (n < 100000 || e.std_error == 0.0)
        return e;

    constexpr int kResamples = 200;
    const RngStream boot(rng.seed(), rng.stream_id() ^ 0x80000000u);
    std::vector<double> replicates(kResamples);
    for_each_block(kResamples, threads, [&](std::int64_t b) {
        auto s = boot.substream(static_cast<std::uint64_t>(b));
        double sum = 0.0;
        for (std::int64_t i = 0; i < n; ++i)
            sum += values[static_cast<std::size_t>(s() % static_cast<std::uint64_t>(n))];
        replicates[b] = -std::log(sum / n);
    });
    std::sort(replicates.begin(), replicates.end());
    // 0.5% and 99.5% percentiles of 200 replicates, interpolated.
    const double boot_lo = 0.5 * (replicates[0] + replicates[1]);
    const double boot_hi = 0.5 * (replicates[kResamples - 2] + replicates[kResamples - 1]);
    if (boot_hi - boot_lo > e.ci99_high - e.ci99_low)
    {
        e.ci99_low = std::min(boot_lo, e.mean);
        e.ci99_high = std::max(boot_hi, e.mean);
        e.method = "bootstrap";
    }
    return e;
}

OracleEstimate mc_onoff_mi(int r, double snr, double A, std::int64_t n, const RngStream& rng, int threads)
{
    if (r < 1)
        throw DimensionError("receive antenna count must be positive");
    check_samples(n, 10000);
    if (!(snr >= 0.0) || !(A > snr))
        throw DomainError("on-off oracle needs A > snr >= 0");
    if (snr == 0.0)
        return {0.0, 0.0, n, 0.0, 0.0, "stratified"};

    const double omega = snr / A;
    const double log_off = std::log1p(-omega);
    const double log_on = std::log(omega);
    const double amplitude = std::sqrt(A);
    const double log_spread = r * std::log1p(A);

    // Log-likelihood ratio log p(y|x) - log p(y) for one draw with the input off (on = false) or on.
    auto llr = [&](std::int64_t i, bool on) {
        auto s = rng.substream(2 * static_cast<std::uint64_t>(i) + (on ? 1 : 0));
        double z = 0.0;
        for (int k = 0; k < r; ++k)
        {
            Complex y = s.complex_normal();
            if (on)
                y += amplitude * s.complex_normal();
            z += std::norm(y);
        }
        const double lp0 = -z;
        const double lpA = -log_spread - z / (1.0 + A);
        const double lmix = log_add_exp(log_off + lp0, log_on + lpA);
        return (on ? lpA : lp0) - lmix;
    };

    const std::int64_t half = n / 2;
    const Moments off = block_moments(half, threads, [&](std::int64_t i) { return llr(i, false); });
    const Moments on = block_moments(n - half, threads, [&](std::int64_t i) { return llr(i, true); });

    OracleEstimate e;
    e.n_samples = n;
    e.mean = (1.0 - omega) * off.mean + omega * on.mean;
    e.std_error = std::sqrt((1.0 - omega) * (1.0 - omega) * off.variance() / off.count +
                            omega * omega * on.variance() / on.count);
    e.ci99_low = e.mean - kZ99 * e.std_error;
    e.ci99_high = e.mean + kZ99 * e.std_error;
    e.method = "stratified";
    return e;
}

OracleEstimate empirical_tail_cdf(int k, double x, std::int64_t n, const RngStream& rng, int threads)
{
    if (k < 1)
        throw DomainError("chi-square shape must be a positive integer");
    if (n < 1)
        throw DomainError("empirical CDF needs at least one sample");
    const Moments m = block_moments(n, threads, [&](std::int64_t i) {
        auto s = rng.substream(static_cast<std::uint64_t>(i));
        double sum = 0.0;
        for (int j = 0; j < k; ++j)
            sum += std::norm(s.complex_normal());
        return sum < x ? 1.0 : 0.0;
    });

    const double p = m.mean;
    const double nn = static_cast<double>(n);
    const double z2 = kZ99 * kZ99;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = kZ99 / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    OracleEstimate e;
    e.mean = p;
    e.n_samples = n;
    e.std_error = std::sqrt(p * (1.0 - p) / nn);
    e.ci99_low = std::max(0.0, std::min(center - half, p));
    e.ci99_high = std::min(1.0, std::max(center + half, p));
    e.method = "wilson";
    return e;
}

SlopeFit slope_fit(std::span<const std::pair<double, double>> points)
{
    if (points.size() < 2)
        throw DomainError("slope fit needs at least two points");
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : points)
    {
        if (!std::isfinite(x) || !std::isfinite(y))
            throw DomainError("slope fit points must be finite");
        mx += x;
        my += y;
    }
    const double n = static_cast<double>(points.size());
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : points)
    {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0)
        throw DomainError("slope fit needs at least two distinct abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (const auto& [x, y] : points)
    {
        const double e = y - (fit.intercept + fit.slope * x);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

} // namespace ncmimo
