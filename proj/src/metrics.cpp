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

#include "wdc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "wdc/error.hpp"

namespace wdc {

namespace {

// Scalar feature stream for histogramming. path_gain_per_sample yields one
// value per sample; real_part_flattened yields nt values per sample.
std::vector<double> feature_values(const WirelessDataset& ds, TvFeature feature) {
    std::vector<double> vals;
    if (feature == TvFeature::path_gain_per_sample) {
        vals.reserve(ds.samples.size());
        const double s2 = ds.scale * ds.scale;
        for (const auto& h : ds.samples) vals.push_back(s2 * sample_power(h));
    } else {
        vals.reserve(ds.samples.size() * static_cast<std::size_t>(ds.nt));
        for (const auto& h : ds.samples)
            for (const auto& z : h) vals.push_back(z.real() * ds.scale);
    }
    return vals;
}

std::vector<double> histogram(const std::vector<double>& vals, int bins, double lo, double hi) {
    std::vector<double> p(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : vals) {
        int b = static_cast<int>(std::floor((v - lo) / width));
        b = std::clamp(b, 0, bins - 1);  // outside-range mass goes to the edge bins
        p[static_cast<std::size_t>(b)] += 1.0;
    }
    const double inv_n = 1.0 / static_cast<double>(vals.size());
    for (double& x : p) x *= inv_n;
    return p;
}

}  // namespace

double path_gain(const WirelessDataset& ds) {
    if (ds.samples.empty()) throw InvalidArgument("path_gain: dataset is empty");
    double sum = 0.0;
    for (const auto& h : ds.samples) sum += sample_power(h);
    return ds.scale * ds.scale * sum / static_cast<double>(ds.samples.size());
}

double tv_distance(const WirelessDataset& a, const WirelessDataset& b, TvFeature feature,
                   int bins, double lo, double hi) {
    if (bins < 1) throw InvalidArgument("tv_distance: bins must be >= 1");
    if (!(lo < hi)) throw InvalidArgument("tv_distance: need lo < hi");
    if (a.samples.empty() || b.samples.empty())
        throw InvalidArgument("tv_distance: datasets must be nonempty");

    const auto p = histogram(feature_values(a, feature), bins, lo, hi);
    const auto q = histogram(feature_values(b, feature), bins, lo, hi);
    double sum = 0.0;
    for (int i = 0; i < bins; ++i)
        sum += std::abs(p[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)]);
    return 0.5 * sum;
}

LossGapReport loss_gap_report(const GanPair& pair, const std::vector<WirelessDataset>& meta_sets,
                              const WirelessDataset& target, const std::vector<Condition>& conds,
                              const Condition& target_cond, int eval_batch, Rng& rng) {
    if (meta_sets.empty()) throw InvalidArgument("loss_gap_report: no meta datasets");
    if (meta_sets.size() != conds.size())
        throw InvalidArgument("loss_gap_report: datasets and conditions differ in count");
    if (target.samples.empty()) throw InvalidArgument("loss_gap_report: target dataset is empty");
    if (eval_batch < 1) throw InvalidArgument("loss_gap_report: eval_batch must be >= 1");

    const auto disc_loss_on = [&](const WirelessDataset& ds, const Condition& cond) {
        const int m = std::min<int>(eval_batch, static_cast<int>(ds.samples.size()));
        const EncodedBatch real = sample_batch(ds, m, rng);
        const auto noise = draw_noise_batch(rng, pair.spec.noise_dim, m);
        EncodedBatch fakes(noise.size());
        for (std::size_t i = 0; i < noise.size(); ++i) {
            std::vector<double> in(noise[i]);
            in.insert(in.end(), cond.begin(), cond.end());
            fakes[i] = forward(pair.spec.gen_spec, pair.gen_params, in);
        }
        return disc_loss(pair, real, fakes, cond);
    };

    LossGapReport report;
    double meta_sum = 0.0;
    for (std::size_t i = 0; i < meta_sets.size(); ++i)
        meta_sum += disc_loss_on(meta_sets[i], conds[i]);
    report.mean_meta_loss = meta_sum / static_cast<double>(meta_sets.size());
    report.target_loss = disc_loss_on(target, target_cond);
    report.gap = std::abs(report.target_loss - report.mean_meta_loss);

    // Pool the meta datasets in index order for the TV proxy. Sets may
    // carry different scales, so pooling happens in raw units.
    WirelessDataset pooled;
    pooled.nt = meta_sets.front().nt;
    pooled.scale = 1.0;
    for (const auto& ds : meta_sets)
        for (std::size_t i = 0; i < ds.samples.size(); ++i)
            pooled.samples.push_back(raw_sample(ds, i));

    double max_gain = path_gain(target);
    for (const auto& ds : meta_sets) max_gain = std::max(max_gain, path_gain(ds));
    report.tv_proxy = tv_distance(pooled, target, TvFeature::path_gain_per_sample, kDefaultTvBins,
                                  0.0, 4.0 * max_gain);
    return report;
}

}  // namespace wdc
