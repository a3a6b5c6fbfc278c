#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>

#include <Eigen/Dense>

namespace ncmimo
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Antenna counts and coherence length of a block-fading link.
struct ChannelDims
{
    int t = 1; ///< transmit antennas
    int r = 1; ///< receive antennas
    int l = 1; ///< coherence length in symbols

    /// Throws DimensionError unless every field is >= 1.
    void validate() const;
    /// Throws TrainingInfeasibleError unless l > t (after validate()).
    void require_training() const;
};

/**
 * Counter-based random stream (Philox4x32-10).
 *
 * Every draw is a pure function of (seed, stream_id, substream index, draw
 * counter), so Monte Carlo loops that key one substream per sample index give
 * identical results for any partitioning of the index range across workers.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class RngStream
{
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint32_t stream_id, std::uint64_t substream = 0);

    /// Fresh stream with the same key, positioned at the start of `index`.
    RngStream substream(std::uint64_t index) const { return RngStream(seed_, stream_id_, index); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint32_t stream_id() const noexcept { return stream_id_; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Circularly-symmetric CN(0,1): real and imaginary parts each N(0, 1/2).
    Complex complex_normal();

private:
    void refill();

    std::uint64_t seed_;
    std::uint32_t stream_id_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
};

/// r x t matrix of i.i.d. CN(0,1) entries.
ComplexMatrix sample_channel_matrix(const ChannelDims& dims, RngStream& rng);

/// rows x cols matrix of i.i.d. CN(0,1) entries.
ComplexMatrix sample_noise(int rows, int cols, RngStream& rng);

/// Y = H X (noise-free).
ComplexMatrix apply_block_channel(const ComplexMatrix& H, const ComplexMatrix& X);
/// Y = H X + W.
ComplexMatrix apply_block_channel(const ComplexMatrix& H, const ComplexMatrix& X, const ComplexMatrix& W);

/**
 * Peaky Gaussian block input: with probability `delta` the t x l block carries
 * i.i.d. CN(0, snr_b / t) symbols, otherwise it is silent. The average power
 * per symbol is delta * snr_b.
 */
ComplexMatrix sample_peaky_gaussian(const ChannelDims& dims, double delta, double snr_b, RngStream& rng);

/// (1 / (l N)) * sum_n trace(X_n X_n^H).
double average_power_check(std::span<const ComplexMatrix> ensemble, int l);

/// log det(I_t + scale * H^H H) through a Cholesky factor of the t x t Gram form.
double log_det_identity_plus_gram(const ComplexMatrix& H, double scale);

/// trace(H^H H), the squared Frobenius norm.
double gram_trace(const ComplexMatrix& H);

} // namespace ncmimo
