// SPDX-License-Identifier: Apache-2.0
//
// tdba - time-domain beam alignment simulation library
// Copyright (C) 2026 The tdba authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef TDBA_WAVEFORMS_HPP
#define TDBA_WAVEFORMS_HPP

#include "system_model.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdba
{

// Feedback taps of a primitive polynomial x^r + sum_t x^t, listed as the
// exponents t < r (always including 0). The recurrence is
// a[n + r] = sum_t a[n + t] mod 2.
struct LfsrPolynomial
{
    int degree = 0;
    std::vector<int> taps;
};

inline const LfsrPolynomial &primitive_polynomial(int degree)
{
    static const std::array<LfsrPolynomial, 11> table{{
        {2, {1, 0}},
        {3, {1, 0}},
        {4, {1, 0}},
        {5, {2, 0}},
        {6, {1, 0}},
        {7, {1, 0}},
        {8, {4, 3, 2, 0}},
        {9, {4, 0}},
        {10, {3, 0}},
        {11, {2, 0}},
        {12, {6, 4, 1, 0}},
    }};
    if (degree < 2 || degree > 12)
        throw std::invalid_argument("no primitive polynomial of degree " + std::to_string(degree));
    return table[static_cast<std::size_t>(degree - 2)];
}

// Preferred pairs of m-sequences; their Gold family has three-valued
// cross-correlation. No preferred pair exists when 4 divides the degree.
inline std::optional<std::pair<LfsrPolynomial, LfsrPolynomial>> gold_preferred_pair(int degree)
{
    switch (degree)
    {
    case 3: return std::pair{LfsrPolynomial{3, {1, 0}}, LfsrPolynomial{3, {2, 0}}};
    case 5: return std::pair{LfsrPolynomial{5, {2, 0}}, LfsrPolynomial{5, {4, 3, 2, 0}}};
    case 6: return std::pair{LfsrPolynomial{6, {1, 0}}, LfsrPolynomial{6, {5, 2, 1, 0}}};
    case 7: return std::pair{LfsrPolynomial{7, {3, 0}}, LfsrPolynomial{7, {3, 2, 1, 0}}};
    case 9: return std::pair{LfsrPolynomial{9, {4, 0}}, LfsrPolynomial{9, {6, 4, 3, 0}}};
    case 10: return std::pair{LfsrPolynomial{10, {3, 0}}, LfsrPolynomial{10, {8, 3, 2, 0}}};
    case 11: return std::pair{LfsrPolynomial{11, {2, 0}}, LfsrPolynomial{11, {8, 5, 2, 0}}};
    default: return std::nullopt;
    }
}

// One full period of the LFSR output as bits. The initial register contents
// a[0..r-1] are the bits of `state`, most significant first.
inline std::vector<std::uint8_t> lfsr_bits(const LfsrPolynomial &poly, std::uint32_t state)
{
    const int r = poly.degree;
    const std::size_t period = (std::size_t{1} << r) - 1;
    if (state == 0 || state > period)
        throw std::invalid_argument("lfsr_bits: initial state must be nonzero and fit the register");
    std::vector<std::uint8_t> a(period);
    for (int i = 0; i < r; ++i)
        a[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((state >> (r - 1 - i)) & 1u);
    for (std::size_t n = 0; n + static_cast<std::size_t>(r) < period; ++n)
    {
        std::uint8_t bit = 0;
        for (int t : poly.taps)
            bit ^= a[n + static_cast<std::size_t>(t)];
        a[n + static_cast<std::size_t>(r)] = bit;
    }
    return a;
}

/// Binary +-1 chip sequence.
struct PnSequence
{
    std::vector<double> chips;
    PnFamily family = PnFamily::gold;
    int index = 0;
    int degree = 0;

    int length() const { return static_cast<int>(chips.size()); }
    bool operator==(const PnSequence &) const = default;
};

inline bool gold_available(int degree) { return gold_preferred_pair(degree).has_value(); }

struct PnLength
{
    int degree = 0;  // LFSR degree used
    int natural = 0; // 2^degree - 1
    int chips = 0;   // final sequence length
};

// Chooses the LFSR degree for a requested chip count.
//  nearest: natural length closest to n_chips (ties go to the longer one)
//  exact:   shortest supported natural length >= n_chips, truncated to n_chips;
//           longer requests cyclically extend the longest supported sequence
inline PnLength resolve_pn_length(PnFamily family, int n_chips, PnLengthMode mode)
{
    if (n_chips < 1)
        throw std::invalid_argument("resolve_pn_length: chip count must be positive");
    std::vector<int> degrees;
    for (int r = 2; r <= 12; ++r)
        if (family == PnFamily::m_sequence || gold_available(r))
            degrees.push_back(r);
    PnLength best;
    if (mode == PnLengthMode::nearest)
    {
        long best_gap = -1;
        for (int r : degrees)
        {
            const int len = (1 << r) - 1;
            const long gap = std::labs(static_cast<long>(len) - n_chips);
            if (best_gap < 0 || gap <= best_gap)
            {
                best_gap = gap;
                best = {r, len, len};
            }
        }
        if (best_gap > best.natural)
            throw std::invalid_argument("resolve_pn_length: no sequence family near " + std::to_string(n_chips) +
                                        " chips (nearest is " + std::to_string(best.natural) +
                                        "); use pn_length=exact");
        return best;
    }
    for (int r : degrees)
        if ((1 << r) - 1 >= n_chips)
            return {r, (1 << r) - 1, n_chips};
    const int r = degrees.back();
    return {r, (1 << r) - 1, n_chips};
}

inline std::uint32_t seed_state(std::uint64_t seed, int degree)
{
    const std::uint64_t period = (std::uint64_t{1} << degree) - 1;
    return static_cast<std::uint32_t>((seed == 0 ? 0 : (seed - 1) % period) + 1);
}

// Builds sequence `index` of the family. For Gold families index 0 and 1 are
// the two m-sequences of the preferred pair and index k >= 2 is their sum with
// the second register advanced by k - 2 chips. For the m-sequence family,
// index k is the base sequence cyclically shifted by k chips.
inline PnSequence gen_pn(PnFamily family, int n_chips, int index, std::uint64_t seed = 1,
                         PnLengthMode mode = PnLengthMode::nearest)
{
    const PnLength len = resolve_pn_length(family, n_chips, mode);
    const auto period = static_cast<std::size_t>(len.natural);
    if (index < 0)
        throw std::invalid_argument("gen_pn: negative index");

    std::vector<std::uint8_t> bits(period);
    if (family == PnFamily::m_sequence)
    {
        if (static_cast<std::size_t>(index) >= period)
            throw std::invalid_argument("gen_pn: m-sequence family has only 2^r - 1 shifts");
        const auto base = lfsr_bits(primitive_polynomial(len.degree), seed_state(seed, len.degree));
        for (std::size_t n = 0; n < period; ++n)
            bits[n] = base[(n + static_cast<std::size_t>(index)) % period];
    }
    else
    {
        const auto pair = gold_preferred_pair(len.degree);
        if (!pair)
            throw std::invalid_argument("gen_pn: no Gold family of degree " + std::to_string(len.degree));
        if (static_cast<std::size_t>(index) > period + 1)
            throw std::invalid_argument("gen_pn: Gold family has only 2^r + 1 members");
        const auto u = lfsr_bits(pair->first, seed_state(seed, len.degree));
        const auto v = lfsr_bits(pair->second, seed_state(1, len.degree));
        for (std::size_t n = 0; n < period; ++n)
        {
            if (index == 0)
                bits[n] = u[n];
            else if (index == 1)
                bits[n] = v[n];
            else
                bits[n] = u[n] ^ v[(n + static_cast<std::size_t>(index - 2)) % period];
        }
    }

    PnSequence seq;
    seq.family = family;
    seq.index = index;
    seq.degree = len.degree;
    seq.chips.resize(static_cast<std::size_t>(len.chips));
    for (std::size_t n = 0; n < seq.chips.size(); ++n)
        seq.chips[n] = bits[n % period] ? -1.0 : 1.0;
    return seq;
}

// Aperiodic correlation sum_k a[k] b[k - lag] in chip units.
inline double xcorr_chips(const PnSequence &a, const PnSequence &b, int lag)
{
    const int na = a.length();
    const int nb = b.length();
    double acc = 0.0;
    const int lo = std::max(0, lag);
    const int hi = std::min(na, nb + lag);
    for (int k = lo; k < hi; ++k)
        acc += a.chips[static_cast<std::size_t>(k)] * b.chips[static_cast<std::size_t>(k - lag)];
    return acc;
}

// Aperiodic correlation scaled to sequence energy, xcorr(a, a, 0) = energy.
inline double xcorr(const PnSequence &a, const PnSequence &b, int lag, double energy)
{
    return xcorr_chips(a, b, lag) * energy / static_cast<double>(a.length());
}

// Periodic correlation sum_k a[k] b[(k - lag) mod n] in chip units.
inline double periodic_xcorr(const PnSequence &a, const PnSequence &b, int lag)
{
    const int n = a.length();
    if (b.length() != n)
        throw std::invalid_argument("periodic_xcorr: sequences differ in length");
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
    {
        const int m = ((k - lag) % n + n) % n;
        acc += a.chips[static_cast<std::size_t>(k)] * b.chips[static_cast<std::size_t>(m)];
    }
    return acc;
}

/// PN sequence as a transmitted waveform: chip amplitude and duration.
struct ChipWaveform
{
    PnSequence seq;
    double amplitude = 1.0; // sqrt of per-chip power
    double chip_duration = 1.0;

    int length() const { return seq.length(); }
    double energy() const { return amplitude * amplitude * chip_duration * seq.length(); }
    double sample(int n) const
    {
        return (n < 0 || n >= seq.length()) ? 0.0 : amplitude * seq.chips[static_cast<std::size_t>(n)];
    }
};

// Chip-rate matched filter, out[k] = T_c * sum_tau samples[tau] * ref*[tau - k]
// for k in [0, out_len). Samples past the end of the buffer are zero.
inline std::vector<std::complex<double>> matched_filter(std::span<const std::complex<double>> samples,
                                                        const ChipWaveform &ref, int out_len)
{
    const int nc = ref.length();
    if (samples.empty() || out_len < 1)
        throw std::invalid_argument("matched_filter: empty input");
    if (static_cast<long>(samples.size()) > static_cast<long>(out_len) + nc - 1)
        throw std::invalid_argument("matched_filter: sample frame longer than the filter span");
    std::vector<std::complex<double>> out(static_cast<std::size_t>(out_len));
    const auto ns = static_cast<int>(samples.size());
    for (int k = 0; k < out_len; ++k)
    {
        std::complex<double> acc{};
        const int hi = std::min(nc, ns - k);
        for (int n = 0; n < hi; ++n)
            acc += samples[static_cast<std::size_t>(k + n)] * ref.seq.chips[static_cast<std::size_t>(n)];
        out[static_cast<std::size_t>(k)] = acc * (ref.amplitude * ref.chip_duration);
    }
    return out;
}

/// Energy-scaled aperiodic correlations between every pair of chain sequences.
class CorrelationTable
{
  public:
    CorrelationTable() = default;

    CorrelationTable(const std::vector<PnSequence> &seqs, double energy)
        : chains_(static_cast<int>(seqs.size())), nc_(seqs.empty() ? 0 : seqs.front().length())
    {
        for (const auto &s : seqs)
            if (s.length() != nc_)
                throw std::invalid_argument("CorrelationTable: sequences differ in length");
        const int span = 2 * nc_ - 1;
        values_.resize(static_cast<std::size_t>(chains_) * chains_ * span);
        for (int a = 0; a < chains_; ++a)
            for (int b = 0; b < chains_; ++b)
                for (int lag = -(nc_ - 1); lag < nc_; ++lag)
                    values_[offset(a, b) + static_cast<std::size_t>(lag + nc_ - 1)] =
                        xcorr(seqs[static_cast<std::size_t>(a)], seqs[static_cast<std::size_t>(b)], lag, energy);
    }

    // R_{from,to}(lag): output of the matched filter of chain `to` at tap
    // k = lag + delay for a unit-gain copy of chain `from` arriving at `delay`.
    double operator()(int from, int to, int lag) const
    {
        if (lag <= -nc_ || lag >= nc_)
            return 0.0;
        return values_[offset(from, to) + static_cast<std::size_t>(lag + nc_ - 1)];
    }

    int chains() const { return chains_; }
    int length() const { return nc_; }

  private:
    std::size_t offset(int a, int b) const
    {
        return (static_cast<std::size_t>(a) * chains_ + b) * static_cast<std::size_t>(2 * nc_ - 1);
    }

    int chains_ = 0;
    int nc_ = 0;
    std::vector<double> values_;
};

// Sequences for the BS chains: chain i gets family member i.
inline std::vector<PnSequence> chain_sequences(const SystemConfig &c, std::uint64_t seed = 1)
{
    std::vector<PnSequence> seqs;
    for (int i = 0; i < c.M_RF; ++i)
        seqs.push_back(gen_pn(c.pn_family, c.N_c, i, seed, c.pn_length));
    return seqs;
}

} // namespace tdba

#endif
