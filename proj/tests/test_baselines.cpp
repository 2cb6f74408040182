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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "wdc/baselines.hpp"
#include "wdc/channel.hpp"
#include "wdc/error.hpp"

using namespace wdc;
using namespace std::complex_literals;

TEST_CASE("smote on two identical points reproduces the point") {
    WirelessDataset ds;
    ds.nt = 1;
    ds.samples = {{1.0 + 2.0i}, {1.0 + 2.0i}};
    Rng rng(3);
    const WirelessDataset out = smote_generate(ds, 1, 10, rng);
    REQUIRE(out.size() == 10);
    for (const auto& h : out.samples) CHECK(std::abs(h[0] - (1.0 + 2.0i)) < 1e-15);
    CHECK(out.meta.at("source") == "synthesized");
    CHECK(out.meta.at("method") == "smote");
}

TEST_CASE("smote interpolations stay on the segment between neighbors") {
    WirelessDataset ds;
    ds.nt = 1;
    ds.samples = {{0.0 + 0.0i}, {1.0 + 0.0i}};
    Rng rng(5);
    const WirelessDataset out = smote_generate(ds, 1, 50, rng);
    for (const auto& h : out.samples) {
        CHECK(h[0].real() >= 0.0);
        CHECK(h[0].real() <= 1.0);
        CHECK(h[0].imag() == 0.0);
    }
}

TEST_CASE("smote output stays inside the componentwise convex hull") {
    ChannelConfig cfg;
    cfg.nt = 2;
    cfg.seed = 7;
    const WirelessDataset ds = generate_dataset(cfg, 40, 0);
    Rng rng(9);
    const WirelessDataset out = smote_generate(ds, 5, 200, rng);
    CHECK(out.nt == ds.nt);
    CHECK(out.scale == ds.scale);

    // Every synthetic point is a convex combination of two dataset points,
    // so each coordinate lies within the dataset's global min/max.
    for (int t = 0; t < ds.nt; ++t) {
        double lo_re = 1e300, hi_re = -1e300, lo_im = 1e300, hi_im = -1e300;
        for (const auto& h : ds.samples) {
            lo_re = std::min(lo_re, h[t].real());
            hi_re = std::max(hi_re, h[t].real());
            lo_im = std::min(lo_im, h[t].imag());
            hi_im = std::max(hi_im, h[t].imag());
        }
        for (const auto& h : out.samples) {
            CHECK(h[t].real() >= lo_re - 1e-12);
            CHECK(h[t].real() <= hi_re + 1e-12);
            CHECK(h[t].imag() >= lo_im - 1e-12);
            CHECK(h[t].imag() <= hi_im + 1e-12);
        }
    }
}

TEST_CASE("smote is deterministic given the stream seed") {
    ChannelConfig cfg;
    cfg.nt = 2;
    cfg.seed = 11;
    const WirelessDataset ds = generate_dataset(cfg, 30, 0);
    Rng r1(13), r2(13);
    const WirelessDataset a = smote_generate(ds, 3, 25, r1);
    const WirelessDataset b = smote_generate(ds, 3, 25, r2);
    CHECK(a.samples == b.samples);
}

TEST_CASE("smote rejects datasets smaller than k + 1") {
    WirelessDataset ds;
    ds.nt = 1;
    ds.samples = {{0.0 + 0.0i}, {1.0 + 0.0i}};
    Rng rng(15);
    CHECK_THROWS_AS(smote_generate(ds, 2, 5, rng), InvalidArgument);
    CHECK_THROWS_AS(smote_generate(ds, 0, 5, rng), InvalidArgument);
    CHECK_THROWS_AS(smote_generate(ds, 1, 0, rng), InvalidArgument);
}

TEST_CASE("generator flop count follows the layer convention") {
    MlpSpec tiny;
    tiny.widths = {1, 1};
    const FlopsReport r = flops_generator(tiny);
    CHECK(r.flops_per_sample == 4);  // 2*1*1 + 1 bias + 1 activation
    CHECK(r.method == "generator");
    CHECK(!r.convention.empty());

    MlpSpec big;
    big.widths = {9, 256, 256, 256, 16};
    // 2*(9*256 + 256*256 + 256*256 + 256*16) + 2*(256 + 256 + 256 + 16)
    CHECK(flops_generator(big).flops_per_sample == 276512);
}

TEST_CASE("interpolation flop count is dominated by the distance scan") {
    const FlopsReport tiny = flops_smote(2, 1, 1);
    CHECK(tiny.flops_per_sample == 10);  // 2*3 distance + 1 selection + 3 interpolation

    const FlopsReport big = flops_smote(200000, 16, 5);
    CHECK(big.flops_per_sample == 6600138);  // 200000*33 + 5*18 + 48
    CHECK(big.assumptions.at("n_dataset") == "200000");
}

TEST_CASE("sample generation is cheaper through the network than by neighbor search") {
    MlpSpec gen;
    gen.widths = {9, 256, 256, 256, 16};
    CHECK(flops_generator(gen).flops_per_sample <
          flops_smote(200000, 16, 5).flops_per_sample);
}
