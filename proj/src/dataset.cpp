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

#include "wdc/dataset.hpp"

#include <cmath>

#include "wdc/error.hpp"

namespace wdc {

void WirelessDataset::validate() const {
    if (nt < 1) throw InvalidArgument("dataset: nt must be >= 1");
    if (!(scale > 0.0)) throw InvalidArgument("dataset: scale must be > 0");
    if (condition_index < 0) throw InvalidArgument("dataset: condition_index must be >= 0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].size() != static_cast<std::size_t>(nt))
            throw InvalidArgument("dataset: sample " + std::to_string(i) + " has length " +
                                  std::to_string(samples[i].size()) + ", expected " +
                                  std::to_string(nt));
        for (const auto& z : samples[i])
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw InvalidArgument("dataset: sample " + std::to_string(i) +
                                      " has a non-finite entry");
    }
}

double sample_power(const ComplexVec& v) {
    double p = 0.0;
    for (const auto& z : v) p += std::norm(z);
    return p;
}

std::vector<double> flatten(const ComplexVec& v) {
    std::vector<double> out(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[2 * i] = v[i].real();
        out[2 * i + 1] = v[i].imag();
    }
    return out;
}

ComplexVec unflatten(std::span<const double> flat) {
    if (flat.size() % 2 != 0) throw InvalidArgument("unflatten: odd-length input");
    ComplexVec out(flat.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = {flat[2 * i], flat[2 * i + 1]};
    return out;
}

std::vector<double> encode_sample(const ComplexVec& h, double scale) {
    if (!(scale > 0.0)) throw InvalidArgument("encode_sample: scale must be > 0");
    std::vector<double> out = flatten(h);
    for (double& x : out) x /= scale;
    return out;
}

ComplexVec decode_sample(std::span<const double> encoded, double scale) {
    if (!(scale > 0.0)) throw InvalidArgument("decode_sample: scale must be > 0");
    ComplexVec out = unflatten(encoded);
    for (auto& z : out) z *= scale;
    return out;
}

WirelessDataset rescaled(const WirelessDataset& ds, double new_scale) {
    if (!(new_scale > 0.0)) throw InvalidArgument("rescaled: scale must be > 0");
    WirelessDataset out = ds;
    const double ratio = ds.scale / new_scale;
    for (auto& s : out.samples)
        for (auto& z : s) z *= ratio;
    out.scale = new_scale;
    return out;
}

ComplexVec raw_sample(const WirelessDataset& ds, std::size_t i) {
    if (i >= ds.samples.size())
        throw InvalidArgument("raw_sample: index " + std::to_string(i) + " out of range for " +
                              std::to_string(ds.samples.size()) + " samples");
    ComplexVec out = ds.samples[i];
    for (auto& z : out) z *= ds.scale;
    return out;
}

}  // namespace wdc
