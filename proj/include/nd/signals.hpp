#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "nd/channel.hpp"
#include "nd/node_set.hpp"
#include "nd/rng.hpp"

namespace nd {

// Antipodal spreading sequence; chips are +1/-1.
struct Signature {
    int node_id = 0;
    std::vector<double> chips;

    int length() const { return static_cast<int>(chips.size()); }
};

// Chip-level received vector. Imaginary parts are exactly zero without fading.
struct ReceivedVector {
    std::vector<std::complex<double>> samples;

    int length() const { return static_cast<int>(samples.size()); }
    std::vector<double> real_samples() const {
        std::vector<double> out(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].real();
        return out;
    }
};

// Maximal-length sequence from a Fibonacci LFSR of the given register length.
// `taps` holds the feedback polynomial's coefficients for x^0..x^(len-1) (the
// x^len term is implicit); bit 1 maps to chip +1. Throws unless the polynomial
// is primitive, i.e. the state period is exactly 2^len - 1.
Signature msequence(int register_len, std::uint32_t taps, int shift, int node_id = 0);

// x^4 + x + 1.
constexpr std::uint32_t kDefaultTaps4 = 0b0011;

// Length-15 signatures for node ids 1..count as distinct cyclic shifts.
std::vector<Signature> signature_bank(int count, int register_len = 4,
                                      std::uint32_t taps = kDefaultTaps4);

// y = sum_k g_k s_k + n. Noise is N(0, N) per chip; under Rayleigh fading the
// vector is complex with independent N(0, N/2) components.
ReceivedVector synthesize(const NodeSet& transmitters,
                          const std::map<int, std::complex<double>>& amplitudes,
                          const std::vector<Signature>& signatures, double noise_power, Rng& rng,
                          Fading fading = Fading::None);

// Signatures as CSV rows of +1/-1, one row per node.
std::string signatures_to_csv(const std::vector<Signature>& signatures);

}  // namespace nd
