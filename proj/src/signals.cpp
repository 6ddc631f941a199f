#include "nd/signals.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace nd {

Signature msequence(int register_len, std::uint32_t taps, int shift, int node_id) {
    if (register_len < 2 || register_len > 20)
        throw std::invalid_argument("msequence: register length out of range");
    const int period = (1 << register_len) - 1;
    const std::uint32_t state_mask = static_cast<std::uint32_t>(period);
    if ((taps & ~state_mask) != 0 || taps == 0)
        throw std::invalid_argument("msequence: taps outside register");

    // Emit the lsb, feed parity(state & taps) back at the top. A primitive
    // polynomial walks all 2^len - 1 nonzero states before returning.
    std::vector<int> bits;
    bits.reserve(static_cast<std::size_t>(period));
    std::uint32_t state = 1;
    for (int i = 0; i < period; ++i) {
        bits.push_back(static_cast<int>(state & 1u));
        const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state & taps) & 1);
        state = (state >> 1) | (fb << (register_len - 1));
        if (state == 1 && i + 1 != period)
            throw std::invalid_argument("msequence: polynomial is not primitive (short period)");
    }
    if (state != 1) throw std::invalid_argument("msequence: polynomial is not primitive");

    Signature sig;
    sig.node_id = node_id;
    sig.chips.resize(static_cast<std::size_t>(period));
    const int offset = ((shift % period) + period) % period;
    for (int i = 0; i < period; ++i)
        sig.chips[static_cast<std::size_t>(i)] = bits[static_cast<std::size_t>((i + offset) % period)] ? 1.0 : -1.0;
    return sig;
}

std::vector<Signature> signature_bank(int count, int register_len, std::uint32_t taps) {
    const int period = (1 << register_len) - 1;
    if (count > period)
        throw std::invalid_argument("signature_bank: more nodes than distinct shifts");
    std::vector<Signature> bank;
    bank.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) bank.push_back(msequence(register_len, taps, k - 1, k));
    return bank;
}

ReceivedVector synthesize(const NodeSet& transmitters,
                          const std::map<int, std::complex<double>>& amplitudes,
                          const std::vector<Signature>& signatures, double noise_power, Rng& rng,
                          Fading fading) {
    if (noise_power < 0.0) throw std::invalid_argument("synthesize: noise power must be >= 0");
    if (signatures.empty()) throw std::invalid_argument("synthesize: no signatures");
    const int len = signatures.front().length();

    ReceivedVector y;
    y.samples.assign(static_cast<std::size_t>(len), {0.0, 0.0});
    for (int id : transmitters.members()) {
        const auto amp = amplitudes.find(id);
        if (amp == amplitudes.end())
            throw std::invalid_argument("synthesize: transmitter has no amplitude");
        const Signature* sig = nullptr;
        for (const auto& s : signatures)
            if (s.node_id == id) sig = &s;
        if (sig == nullptr) throw std::invalid_argument("synthesize: transmitter has no signature");
        if (sig->length() != len) throw std::invalid_argument("synthesize: signature length mismatch");
        for (int l = 0; l < len; ++l)
            y.samples[static_cast<std::size_t>(l)] += amp->second * sig->chips[static_cast<std::size_t>(l)];
    }
    if (noise_power > 0.0) {
        if (fading == Fading::Rayleigh) {
            const double s = std::sqrt(noise_power * 0.5);
            for (auto& v : y.samples) v += std::complex<double>(s * rng.next_gauss(), s * rng.next_gauss());
        } else {
            const double s = std::sqrt(noise_power);
            for (auto& v : y.samples) v += s * rng.next_gauss();
        }
    }
    return y;
}

std::string signatures_to_csv(const std::vector<Signature>& signatures) {
    std::ostringstream out;
    out << "node_id,chips\n";
    for (const auto& s : signatures) {
        out << s.node_id;
        for (double c : s.chips) out << ',' << (c > 0 ? 1 : -1);
        out << '\n';
    }
    return out.str();
}

}  // namespace nd
