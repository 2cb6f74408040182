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

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wdc {

using ComplexVec = std::vector<std::complex<double>>;

/// A set of channel vectors for one environment.
///
/// Samples are stored in normalized units: stored = raw / scale, so a
/// dataset with scale 1.0 holds raw physical channels. `condition_index`
/// identifies which environment the set belongs to. `meta` is free-form
/// provenance (source, seeds, generating config digest).
struct WirelessDataset {
    int nt = 0;
    std::vector<ComplexVec> samples;
    int condition_index = 0;
    double scale = 1.0;
    std::map<std::string, std::string> meta;

    std::size_t size() const { return samples.size(); }

    /// Throws InvalidArgument if any structural invariant is broken.
    void validate() const;
};

/// ‖v‖² of a complex vector.
double sample_power(const ComplexVec& v);

/// Interleave (Re, Im) of each entry into a flat real vector of length 2n.
std::vector<double> flatten(const ComplexVec& v);

/// Inverse of flatten. `flat.size()` must be even.
ComplexVec unflatten(std::span<const double> flat);

/// Real-valued network interface for a raw channel: flatten then divide by
/// scale. decode_sample is the exact inverse.
std::vector<double> encode_sample(const ComplexVec& h, double scale);
ComplexVec decode_sample(std::span<const double> encoded, double scale);

/// Same channels expressed at a different normalization: stored entries are
/// rescaled so that stored * scale (the raw channel) is preserved.
WirelessDataset rescaled(const WirelessDataset& ds, double new_scale);

/// Raw (physical-unit) copy of sample i: stored * scale.
ComplexVec raw_sample(const WirelessDataset& ds, std::size_t i);

}  // namespace wdc
