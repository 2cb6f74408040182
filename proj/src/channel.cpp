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

#include "wdc/channel.hpp"

#include <cmath>
#include <sstream>

#include "wdc/error.hpp"

namespace wdc {

void ChannelConfig::validate() const {
    if (nt < 1) throw InvalidArgument("channel.nt must be >= 1");
    if (num_paths < 1) throw InvalidArgument("channel.num_paths must be >= 1");
    if (!(power_gain >= 0.0)) throw InvalidArgument("channel.power_gain must be >= 0");
    if (!(center_freq_ghz > 0.0)) throw InvalidArgument("channel.center_freq_ghz must be > 0");
    if (!(distance_m > 0.0)) throw InvalidArgument("channel.distance_m must be > 0");
    if (!(aod_low >= 0.0 && aod_low < aod_high && aod_high <= 2.0 * std::numbers::pi + 1e-12))
        throw InvalidArgument("channel AoD range must satisfy 0 <= aod_low < aod_high <= 2*pi");
}

std::string ChannelConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "nt=" << nt << ";L=" << num_paths << ";P0=" << power_gain
       << ";f=" << center_freq_ghz << ";R=" << distance_m
       << ";aod=[" << aod_low << "," << aod_high << ")"
       << ";seed=" << seed;
    return os.str();
}

ComplexVec steering_vector(double theta, int nt) {
    if (nt < 1) throw InvalidArgument("steering_vector: nt must be >= 1");
    if (!std::isfinite(theta)) throw InvalidArgument("steering_vector: theta must be finite");
    ComplexVec a(nt);
    const double inv = 1.0 / static_cast<double>(nt);
    for (int k = 0; k < nt; ++k) {
        const double phase = static_cast<double>(k) * theta;
        a[k] = {inv * std::cos(phase), inv * std::sin(phase)};
    }
    return a;
}

double path_gain_variance(const ChannelConfig& cfg) {
    cfg.validate();
    const double f = cfg.center_freq_ghz;
    const double r = cfg.distance_m;
    return cfg.power_gain / (f * f * r * r);
}

ComplexVec sample_channel(const ChannelConfig& cfg, Rng& rng) {
    cfg.validate();
    const double c = path_gain_variance(cfg);
    const double amp = std::sqrt(static_cast<double>(cfg.nt) / static_cast<double>(cfg.num_paths));
    ComplexVec h(cfg.nt, {0.0, 0.0});
    for (int l = 0; l < cfg.num_paths; ++l) {
        const double theta = rng.uniform(cfg.aod_low, cfg.aod_high);
        const std::complex<double> rho = rng.cgaussian(c);
        const ComplexVec a = steering_vector(theta, cfg.nt);
        for (int k = 0; k < cfg.nt; ++k) h[k] += rho * a[k];
    }
    for (auto& z : h) z *= amp;
    return h;
}

WirelessDataset generate_dataset(const ChannelConfig& cfg, std::size_t n, int condition_index) {
    cfg.validate();
    if (n < 1) throw InvalidArgument("generate_dataset: n must be >= 1");
    WirelessDataset ds;
    ds.nt = cfg.nt;
    ds.condition_index = condition_index;
    ds.scale = 1.0;
    ds.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng stream(derive_seed(cfg.seed, i));
        ds.samples[i] = sample_channel(cfg, stream);
    }
    ds.meta["source"] = "genie";
    ds.meta["seed"] = std::to_string(cfg.seed);
    ds.meta["channel_config"] = cfg.canonical();
    return ds;
}

}  // namespace wdc
