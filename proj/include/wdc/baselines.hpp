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
#include <map>
#include <string>

#include "wdc/dataset.hpp"
#include "wdc/mlp.hpp"
#include "wdc/rng.hpp"

namespace wdc {

/// Interpolation-based synthesis: each synthetic sample is
/// x + lambda * (x_nn - x) with x a uniformly drawn base sample, x_nn a
/// uniformly drawn member of x's k nearest neighbors (Euclidean distance
/// on the encoded vectors), lambda uniform on [0, 1]. Used purely as a
/// data generator, no class-imbalance semantics.
WirelessDataset smote_generate(const WirelessDataset& dataset, int k, int n, Rng& rng);

/// Cost of generating one sample, under a single stated counting
/// convention. Reports never claim to match published figures; orderings
/// between methods are the meaningful output.
struct FlopsReport {
    std::string method;
    std::uint64_t flops_per_sample = 0;
    std::string convention;
    std::map<std::string, std::string> assumptions;
};

/// Feed-forward generator cost: per layer 2*in*out (multiply-accumulate
/// counted as 2) + out (bias add) + out (activation evaluation).
FlopsReport flops_generator(const MlpSpec& spec);

/// Interpolation cost per sample: n_dataset * (2*dim + 1) distance work
/// + k * ceil(log2 n_dataset) selection + 3*dim interpolation.
FlopsReport flops_smote(std::uint64_t n_dataset, int dim, int k);

}  // namespace wdc
