// wdc: wireless channel dataset synthesis with meta-trained conditional GANs
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

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace wdc {

/// SplitMix64 finalizer. Used to derive independent child seeds from a
/// parent seed plus an index, so per-sample streams can be created in any
/// order (or in parallel) without sharing state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `index` of the stream family rooted at `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Deterministic random stream: mt19937_64 plus explicit uniform/Gaussian
/// helpers. Gaussians come from Box-Muller on our own uniforms instead of
/// std::normal_distribution, whose draw sequence is implementation-defined;
/// this keeps byte-level reproducibility under our control.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n). n must be > 0; modulo bias is negligible
    /// for any n this library uses (n << 2^64).
    std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

    /// Standard normal draw. Pairs are generated by Box-Muller and the
    /// second value is cached, so consumption parity affects the stream.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex Gaussian CN(0, variance): real and
    /// imaginary parts are independent N(0, variance / 2).
    std::complex<double> cgaussian(double variance) {
        const double s = std::sqrt(variance * 0.5);
        const double re = s * gaussian();
        const double im = s * gaussian();
        return {re, im};
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wdc
