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

#include <cmath>
#include <complex>

#include "wdc/dataset.hpp"
#include "wdc/error.hpp"

using namespace wdc;
using namespace std::complex_literals;

TEST_CASE("sample_power sums squared magnitudes") {
    CHECK(sample_power({1.0 + 0.0i, 0.0 + 1.0i}) == doctest::Approx(2.0));
    CHECK(sample_power({}) == doctest::Approx(0.0));
    CHECK(sample_power({3.0 + 4.0i}) == doctest::Approx(25.0));
}

TEST_CASE("flatten interleaves real and imaginary parts") {
    const ComplexVec h = {1.0 + 2.0i, -3.0 + 0.5i};
    const std::vector<double> flat = flatten(h);
    CHECK(flat == std::vector<double>{1.0, 2.0, -3.0, 0.5});
    CHECK(unflatten(flat) == h);
}

TEST_CASE("unflatten rejects odd-length input") {
    CHECK_THROWS_AS(unflatten(std::vector<double>{1.0, 2.0, 3.0}), InvalidArgument);
}

TEST_CASE("encode_sample divides by the scale") {
    CHECK(encode_sample({1.0 + 2.0i}, 1.0) == std::vector<double>{1.0, 2.0});
    CHECK(encode_sample({2.0 + 0.0i, 0.0 - 4.0i}, 2.0) ==
          std::vector<double>{1.0, 0.0, 0.0, -2.0});
}

TEST_CASE("decode_sample inverts encode_sample") {
    const ComplexVec h = {0.25 - 1.5i, 2.0 + 3.0i, -0.75 + 0.0i};
    const double scale = 1.7;
    CHECK(decode_sample(encode_sample(h, scale), scale) == h);
}

TEST_CASE("raw_sample undoes the stored scale") {
    WirelessDataset ds;
    ds.nt = 1;
    ds.scale = 2.0;
    ds.samples = {{0.5 + 1.0i}};
    const ComplexVec raw = raw_sample(ds, 0);
    CHECK(raw[0] == 1.0 + 2.0i);
    CHECK_THROWS_AS(raw_sample(ds, 1), InvalidArgument);
}

TEST_CASE("rescaled changes stored values but not the raw channels") {
    WirelessDataset ds;
    ds.nt = 2;
    ds.scale = 1.0;
    ds.condition_index = 3;
    ds.meta["source"] = "genie";
    ds.samples = {{1.0 + 1.0i, 2.0 - 1.0i}, {0.0 + 0.5i, -1.0 + 0.0i}};

    const WirelessDataset out = rescaled(ds, 4.0);
    CHECK(out.scale == 4.0);
    CHECK(out.condition_index == 3);
    CHECK(out.meta.at("source") == "genie");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const ComplexVec a = raw_sample(ds, i);
        const ComplexVec b = raw_sample(out, i);
        for (int t = 0; t < ds.nt; ++t) CHECK(std::abs(a[t] - b[t]) < 1e-15);
    }
    CHECK_THROWS_AS(rescaled(ds, 0.0), InvalidArgument);
    CHECK_THROWS_AS(rescaled(ds, -1.0), InvalidArgument);
}

TEST_CASE("validate rejects structural defects") {
    WirelessDataset ds;
    ds.nt = 2;
    ds.scale = 1.0;
    ds.samples = {{1.0 + 0.0i, 0.0 + 0.0i}};
    CHECK_NOTHROW(ds.validate());

    WirelessDataset bad = ds;
    bad.nt = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    bad = ds;
    bad.samples.push_back({1.0 + 0.0i});  // ragged row
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    bad = ds;
    bad.scale = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    bad = ds;
    bad.condition_index = -1;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    bad = ds;
    bad.samples[0][0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
