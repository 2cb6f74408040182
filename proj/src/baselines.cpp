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

#include "wdc/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "wdc/error.hpp"

namespace wdc {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

std::uint64_t ceil_log2(std::uint64_t n) {
    std::uint64_t bits = 0;
    while ((1ull << bits) < n) ++bits;
    return bits;
}

}  // namespace

WirelessDataset smote_generate(const WirelessDataset& dataset, int k, int n, Rng& rng) {
    if (k < 1) throw InvalidArgument("smote_generate: k must be >= 1");
    if (n < 1) throw InvalidArgument("smote_generate: n must be >= 1");
    if (dataset.samples.size() < static_cast<std::size_t>(k) + 1)
        throw InvalidArgument("smote_generate: need at least k + 1 = " + std::to_string(k + 1) +
                              " samples, have " + std::to_string(dataset.samples.size()));
    dataset.validate();

    const std::size_t count = dataset.samples.size();
    std::vector<std::vector<double>> encoded(count);
    for (std::size_t i = 0; i < count; ++i) encoded[i] = flatten(dataset.samples[i]);

    // k nearest neighbors of every sample, self excluded; distance ties
    // break toward the lower index so neighbor lists are deterministic.
    std::vector<std::vector<std::size_t>> neighbors(count);
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < count; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            cand.emplace_back(sq_dist(encoded[i], encoded[j]), j);
        }
        std::stable_sort(cand.begin(), cand.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        neighbors[i].reserve(static_cast<std::size_t>(k));
        for (int m = 0; m < k; ++m) neighbors[i].push_back(cand[static_cast<std::size_t>(m)].second);
    }

    WirelessDataset out;
    out.nt = dataset.nt;
    out.condition_index = dataset.condition_index;
    out.scale = dataset.scale;
    out.meta["source"] = "synthesized";
    out.meta["method"] = "smote";

    out.samples.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        // Draw order: base index, neighbor slot, lambda.
        const std::size_t base = rng.uniform_index(count);
        const std::size_t nn = neighbors[base][rng.uniform_index(static_cast<std::size_t>(k))];
        const double lambda = rng.uniform();
        std::vector<double> synth(encoded[base].size());
        for (std::size_t d = 0; d < synth.size(); ++d)
            synth[d] = encoded[base][d] + lambda * (encoded[nn][d] - encoded[base][d]);
        out.samples.push_back(unflatten(synth));
    }
    return out;
}

FlopsReport flops_generator(const MlpSpec& spec) {
    spec.validate();
    std::uint64_t flops = 0;
    for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        const std::uint64_t in = static_cast<std::uint64_t>(spec.widths[l]);
        const std::uint64_t out = static_cast<std::uint64_t>(spec.widths[l + 1]);
        flops += 2 * in * out + out + out;
    }
    FlopsReport report;
    report.method = "generator";
    report.flops_per_sample = flops;
    report.convention =
        "per layer: 2*in*out (multiply-accumulate = 2 flops) + out (bias add) + out (activation)";
    report.assumptions["net"] = spec.canonical();
    return report;
}

FlopsReport flops_smote(std::uint64_t n_dataset, int dim, int k) {
    if (n_dataset == 0) throw InvalidArgument("flops_smote: n_dataset must be positive");
    if (dim < 1) throw InvalidArgument("flops_smote: dim must be positive");
    if (k < 1) throw InvalidArgument("flops_smote: k must be positive");

    const std::uint64_t d = static_cast<std::uint64_t>(dim);
    const std::uint64_t flops = n_dataset * (2 * d + 1) +
                                static_cast<std::uint64_t>(k) * ceil_log2(n_dataset) + 3 * d;
    FlopsReport report;
    report.method = "smote";
    report.flops_per_sample = flops;
    report.convention =
        "per sample: n*(2*dim + 1) distance work + k*ceil(log2 n) selection + 3*dim interpolation";
    report.assumptions["n_dataset"] = std::to_string(n_dataset);
    report.assumptions["dim"] = std::to_string(dim);
    report.assumptions["k"] = std::to_string(k);
    return report;
}

}  // namespace wdc
