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

#include <cstdint>
#include <numbers>
#include <string>

#include "wdc/dataset.hpp"
#include "wdc/rng.hpp"

namespace wdc {

/// Physical parameters of one narrowband geometric MISO environment.
///
/// The channel is h = sqrt(nt/L) * sum_l rho_l * a(theta_l) with
/// rho_l ~ CN(0, C), C = power_gain / (center_freq^2 * distance^2), and
/// a(theta) the ULA steering vector. theta_l is the inter-element phase,
/// drawn uniformly on [aod_low, aod_high). Frequency is in GHz, distance
/// in meters; the defaults put the 28 GHz / 1 m mean path gain at 1.0.
struct ChannelConfig {
    int nt = 8;
    int num_paths = 3;
    double power_gain = 784.0;
    double center_freq_ghz = 28.0;
    double distance_m = 1.0;
    double aod_low = 0.0;
    double aod_high = 2.0 * std::numbers::pi;
    std::uint64_t seed = 0;

    void validate() const;

    /// Stable textual form used for provenance digests.
    std::string canonical() const;
};

/// ULA transmit array response (1/nt) * [1, e^{j theta}, ..., e^{j (nt-1) theta}].
/// Squared norm is 1/nt for every theta.
ComplexVec steering_vector(double theta, int nt);

/// Per-path complex-gain variance C = P0 / (f^2 R^2).
double path_gain_variance(const ChannelConfig& cfg);

/// One channel draw. Consumes, per path: theta (one uniform), then the
/// complex gain (two Gaussians). Deterministic given the rng state.
ComplexVec sample_channel(const ChannelConfig& cfg, Rng& rng);

/// n independent draws; sample i uses the stream derive_seed(cfg.seed, i),
/// so generation is order-independent. Result has scale 1.0 (raw units)
/// and provenance meta {source, seed, channel_config}.
WirelessDataset generate_dataset(const ChannelConfig& cfg, std::size_t n, int condition_index);

}  // namespace wdc
