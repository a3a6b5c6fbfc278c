#include "ncmimo/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ncmimo/errors.hpp"

namespace ncmimo
{
namespace
{
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi)
{
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
        mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

void check_finite(const ComplexMatrix& m, const char* name)
{
    if (!m.allFinite())
        throw DomainError(std::string(name) + " has non-finite entries");
}
} // namespace

void ChannelDims::validate() const
{
    if (t < 1 || r < 1 || l < 1)
        throw DimensionError("channel dims must be positive (t=" + std::to_string(t) + ", r=" + std::to_string(r) +
                             ", l=" + std::to_string(l) + ")");
}

void ChannelDims::require_training() const
{
    validate();
    if (l <= t)
        throw TrainingInfeasibleError("training needs l > t (l=" + std::to_string(l) + ", t=" + std::to_string(t) +
                                      ")");
}

RngStream::RngStream(std::uint64_t seed, std::uint32_t stream_id, std::uint64_t substream)
    : seed_(seed), stream_id_(stream_id),
      counter_{0u, static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32), stream_id}
{
}

void RngStream::refill()
{
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    block_ = philox4x32_10(counter_, key);
    ++counter_[0];
    used_ = 0;
}

RngStream::result_type RngStream::operator()()
{
    if (used_ > 2)
        refill();
    const std::uint64_t value = (static_cast<std::uint64_t>(block_[used_]) << 32) | block_[used_ + 1];
    used_ += 2;
    return value;
}

double RngStream::uniform()
{
    // 53 random bits, offset by half an ulp so 0 and 1 are excluded.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

Complex RngStream::complex_normal()
{
    const double magnitude = std::sqrt(-std::log(uniform()));
    const double phase = 2.0 * std::numbers::pi * uniform();
    return {magnitude * std::cos(phase), magnitude * std::sin(phase)};
}

ComplexMatrix sample_noise(int rows, int cols, RngStream& rng)
{
    if (rows < 1 || cols < 1)
        throw DimensionError("noise matrix must have positive dimensions");
    ComplexMatrix w(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            w(i, j) = rng.complex_normal();
    return w;
}

ComplexMatrix sample_channel_matrix(const ChannelDims& dims, RngStream& rng)
{
    dims.validate();
    return sample_noise(dims.r, dims.t, rng);
}

ComplexMatrix apply_block_channel(const ComplexMatrix& H, const ComplexMatrix& X)
{
    if (H.cols() != X.rows())
        throw DimensionError("H is " + std::to_string(H.rows()) + "x" + std::to_string(H.cols()) + " but X is " +
                             std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
    check_finite(H, "H");
    check_finite(X, "X");
    return H * X;
}

ComplexMatrix apply_block_channel(const ComplexMatrix& H, const ComplexMatrix& X, const ComplexMatrix& W)
{
    ComplexMatrix y = apply_block_channel(H, X);
    if (W.rows() != y.rows() || W.cols() != y.cols())
        throw DimensionError("noise is " + std::to_string(W.rows()) + "x" + std::to_string(W.cols()) +
                             " but HX is " + std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
    check_finite(W, "W");
    y += W;
    return y;
}

ComplexMatrix sample_peaky_gaussian(const ChannelDims& dims, double delta, double snr_b, RngStream& rng)
{
    dims.validate();
    if (!(delta > 0.0 && delta <= 1.0))
        throw DomainError("duty fraction must lie in (0, 1]");
    if (!(snr_b >= 0.0))
        throw DomainError("in-block SNR must be nonnegative");
    ComplexMatrix x = ComplexMatrix::Zero(dims.t, dims.l);
    if (rng.uniform() < delta)
    {
        const double amplitude = std::sqrt(snr_b / dims.t);
        for (int j = 0; j < dims.l; ++j)
            for (int i = 0; i < dims.t; ++i)
                x(i, j) = amplitude * rng.complex_normal();
    }
    return x;
}

double average_power_check(std::span<const ComplexMatrix> ensemble, int l)
{
    if (ensemble.empty())
        throw DomainError("average power of an empty ensemble");
    if (l < 1)
        throw DimensionError("coherence length must be positive");
    double total = 0.0;
    for (const auto& x : ensemble)
    {
        if (x.cols() != l || x.rows() != ensemble.front().rows())
            throw DimensionError("inconsistent input block dimensions in ensemble");
        total += x.squaredNorm();
    }
    return total / (static_cast<double>(l) * static_cast<double>(ensemble.size()));
}

double gram_trace(const ComplexMatrix& H) { return H.squaredNorm(); }

double log_det_identity_plus_gram(const ComplexMatrix& H, double scale)
{
    const auto t = H.cols();
    ComplexMatrix gram = ComplexMatrix::Identity(t, t);
    gram.noalias() += scale * (H.adjoint() * H);
    Eigen::LLT<ComplexMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw DomainError("I + c H^H H is not positive definite (c < 0?)");
    const auto& factor = llt.matrixLLT();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < t; ++i)
        log_det += std::log(factor(i, i).real());
    return 2.0 * log_det;
}

} // namespace ncmimo
