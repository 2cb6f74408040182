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

#include <string>
#include <vector>

#include "wdc/dataset.hpp"
#include "wdc/gan.hpp"

namespace wdc {

/// Mean squared channel norm in raw physical units (the stored scale is
/// undone first). For genie data this estimates the per-path variance
/// sum, i.e. the environment's large-scale gain.
double path_gain(const WirelessDataset& ds);

enum class TvFeature { path_gain_per_sample, real_part_flattened };

/// Histogram total-variation distance between the two datasets on the
/// chosen scalar feature: 0.5 * sum_b |p_b - q_b| over `bins` equal-width
/// bins spanning [lo, hi]. Feature values outside the range land in the
/// nearest edge bin, so no probability mass is dropped.
double tv_distance(const WirelessDataset& a, const WirelessDataset& b, TvFeature feature,
                   int bins, double lo, double hi);

struct LossGapReport {
    double gap = 0.0;       // |L_target(theta) - mean_i L_meta_i(theta)|
    double tv_proxy = 0.0;  // TV(pooled meta, target) on per-sample path gain
    double target_loss = 0.0;
    double mean_meta_loss = 0.0;
};

/// Diagnostic pairing of the discriminator-loss gap with an empirical
/// environment-distance proxy. Both numbers are observational: the gap is
/// measured at the current parameters, not at any optimum, and the TV is
/// a scalar-feature histogram proxy, so no inequality between them is
/// asserted anywhere.
///
/// Losses are evaluated with `eval_batch` fakes per condition drawn from
/// the pair's generator; `rng` drives both the fake noise and the real
/// batch subsampling.
LossGapReport loss_gap_report(const GanPair& pair, const std::vector<WirelessDataset>& meta_sets,
                              const WirelessDataset& target, const std::vector<Condition>& conds,
                              const Condition& target_cond, int eval_batch, Rng& rng);

/// Default TV histogram config: 50 bins on [0, 4 * reference gain].
inline constexpr int kDefaultTvBins = 50;

}  // namespace wdc
