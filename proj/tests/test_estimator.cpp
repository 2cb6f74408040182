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
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "wdc/channel.hpp"
#include "wdc/error.hpp"
#include "wdc/estimator.hpp"

using namespace wdc;
using namespace std::complex_literals;

namespace {

// Realification of the linear map y -> F y (F's columns are the pilot
// beams) as single-layer network weights in the canonical layout. With
// unitary pilots this inverts the observation y = F^H h exactly.
EstimatorNet inversion_net(const PilotConfig& cfg) {
    EstimatorNet net;
    net.pilot_cfg = cfg;
    net.spec.widths = {2 * cfg.num_pilots, 2 * cfg.nt};
    net.spec.output = OutputAct::linear;
    net.ref_power = 1.0;
    const int in = 2 * cfg.num_pilots;
    net.params.assign(net.spec.param_count(), 0.0);
    for (int a = 0; a < cfg.nt; ++a) {
        for (int p = 0; p < cfg.num_pilots; ++p) {
            const std::complex<double> f = cfg.pilots[p][a];
            net.params[(2 * a) * in + 2 * p] = f.real();
            net.params[(2 * a) * in + 2 * p + 1] = -f.imag();
            net.params[(2 * a + 1) * in + 2 * p] = f.imag();
            net.params[(2 * a + 1) * in + 2 * p + 1] = f.real();
        }
    }
    return net;
}

WirelessDataset line_of_sight_set(int nt, std::size_t n, std::uint64_t seed) {
    ChannelConfig cfg;
    cfg.nt = nt;
    cfg.num_paths = 1;
    cfg.seed = seed;
    return generate_dataset(cfg, n, 0);
}

}  // namespace

TEST_CASE("dft pilot beams are unit-norm and mutually orthogonal") {
    const auto pilots = make_dft_pilots(8, 8);
    REQUIRE(pilots.size() == 8);
    for (int p = 0; p < 8; ++p) {
        double norm2 = 0.0;
        for (const auto& z : pilots[p]) norm2 += std::norm(z);
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
        for (int q = p + 1; q < 8; ++q) {
            std::complex<double> dot = 0.0;
            for (int a = 0; a < 8; ++a) dot += std::conj(pilots[p][a]) * pilots[q][a];
            CHECK(std::abs(dot) < 1e-12);
        }
    }
    // First beam is the constant vector 1/sqrt(nt).
    for (const auto& z : pilots[0])
        CHECK(std::abs(z - 1.0 / std::sqrt(8.0)) < 1e-12);
}

TEST_CASE("pilot config validation enforces shape and unit norms") {
    PilotConfig cfg = make_pilot_config(4, 2, {0.0, 10.0}, 0);
    CHECK_NOTHROW(cfg.validate());

    PilotConfig bad = cfg;
    bad.pilots[0][0] *= 2.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    bad = cfg;
    bad.num_pilots = 5;  // exceeds nt
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    bad = cfg;
    bad.snr_grid_db.clear();
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("noiseless observations with a full pilot set determine the channel") {
    const PilotConfig cfg = make_pilot_config(4, 4, {300.0}, 0);
    Rng rng(5);
    ComplexVec h(4);
    for (auto& z : h) z = rng.cgaussian(1.0);

    Rng noise_rng(9);
    const auto y = simulate_pilots(h, cfg, 300.0, 1.0, noise_rng);
    REQUIRE(y.size() == 8);

    // Reconstruct via h = F y and compare.
    const EstimatorNet net = inversion_net(cfg);
    const ComplexVec est = estimate_channel(net, y);
    REQUIRE(est.size() == 4);
    for (int a = 0; a < 4; ++a) CHECK(std::abs(est[a] - h[a]) < 1e-9);
}

TEST_CASE("observation of the zero channel is pure noise at the set power") {
    const PilotConfig cfg = make_pilot_config(4, 4, {3.0}, 0);
    const ComplexVec h(4, 0.0);
    const double ref_power = 2.0;
    const double snr_db = 3.0;
    const double sigma2 = ref_power * std::pow(10.0, -snr_db / 10.0);

    Rng rng(33);
    double acc = 0.0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        const auto y = simulate_pilots(h, cfg, snr_db, ref_power, rng);
        for (std::size_t k = 0; k < y.size(); k += 2)
            acc += y[k] * y[k] + y[k + 1] * y[k + 1];
    }
    const double mean_power = acc / trials;
    CHECK(mean_power == doctest::Approx(4.0 * sigma2).epsilon(0.05));
}

TEST_CASE("simulate_pilots rejects mismatched channel length") {
    const PilotConfig cfg = make_pilot_config(4, 2, {0.0}, 0);
    Rng rng(1);
    CHECK_THROWS_AS(simulate_pilots(ComplexVec(3, 0.0), cfg, 0.0, 1.0, rng), InvalidArgument);
}

TEST_CASE("an exact linear-inversion network scores zero error") {
    const PilotConfig cfg = make_pilot_config(4, 4, {300.0}, 0);
    const EstimatorNet net = inversion_net(cfg);
    WirelessDataset test_set = line_of_sight_set(4, 200, 77);
    Rng rng(13);
    const EvalResult res = eval_mse(net, test_set, cfg, rng);
    REQUIRE(res.points.size() == 1);
    CHECK(res.points[0].snr_db == 300.0);
    CHECK(res.points[0].nmse < 1e-20);
    CHECK(res.excluded == 0);
}

TEST_CASE("a zero network scores normalized error exactly one") {
    const PilotConfig cfg = make_pilot_config(4, 4, {0.0, 10.0}, 0);
    EstimatorNet net = inversion_net(cfg);
    net.params.assign(net.params.size(), 0.0);
    WirelessDataset test_set = line_of_sight_set(4, 100, 78);
    Rng rng(14);
    const EvalResult res = eval_mse(net, test_set, cfg, rng);
    REQUIRE(res.points.size() == 2);
    for (const auto& point : res.points)
        CHECK(point.nmse == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero-norm test channels are excluded and counted") {
    const PilotConfig cfg = make_pilot_config(2, 2, {20.0}, 0);
    EstimatorNet net;
    net.pilot_cfg = cfg;
    net.spec.widths = {4, 4};
    net.params.assign(net.spec.param_count(), 0.0);
    net.ref_power = 1.0;

    WirelessDataset test_set;
    test_set.nt = 2;
    test_set.samples = {{1.0 + 0.0i, 0.0 + 1.0i}, {0.0 + 0.0i, 0.0 + 0.0i}};
    Rng rng(15);
    const EvalResult res = eval_mse(net, test_set, cfg, rng);
    CHECK(res.excluded == 1);
    REQUIRE(res.points.size() == 1);
    CHECK(res.points[0].nmse == doctest::Approx(1.0));

    WirelessDataset all_zero;
    all_zero.nt = 2;
    all_zero.samples = {{0.0 + 0.0i, 0.0 + 0.0i}};
    Rng rng2(16);
    CHECK_THROWS_AS(eval_mse(net, all_zero, cfg, rng2), InvalidArgument);
}

TEST_CASE("evaluation refuses a network built for different pilots") {
    const PilotConfig two = make_pilot_config(4, 2, {0.0}, 0);
    const PilotConfig four = make_pilot_config(4, 4, {0.0}, 0);
    const EstimatorNet net = inversion_net(two);
    WirelessDataset test_set = line_of_sight_set(4, 10, 79);
    Rng rng(17);
    CHECK_THROWS_AS(eval_mse(net, test_set, four, rng), CompatibilityError);
}

TEST_CASE("training with zero epochs returns the fresh initialization") {
    const PilotConfig cfg = make_pilot_config(2, 2, {10.0}, 3);
    const WirelessDataset train_set = line_of_sight_set(2, 32, 80);
    EstimatorHyper hyper;
    hyper.hidden_layers = 1;
    hyper.hidden_width = 8;
    Rng rng(18);
    const EstimatorNet net = train_estimator(train_set, cfg, 0, rng, hyper);
    // Initialization consumes one value from the caller's stream.
    Rng twin(18);
    const EstimatorNet fresh = init_estimator(cfg, hyper, twin.next_u64());
    CHECK(net.params == fresh.params);
    // Reference power still reflects the training set.
    double acc = 0.0;
    for (std::size_t i = 0; i < train_set.size(); ++i)
        acc += sample_power(raw_sample(train_set, i));
    CHECK(net.ref_power == doctest::Approx(acc / train_set.size()).epsilon(1e-12));
}

TEST_CASE("training rejects an empty dataset") {
    const PilotConfig cfg = make_pilot_config(2, 2, {10.0}, 3);
    Rng rng(19);
    CHECK_THROWS_AS(train_estimator(WirelessDataset{}, cfg, 1, rng), InvalidArgument);
}

TEST_CASE("a near-linear noiseless task trains to small error") {
    const PilotConfig cfg = make_pilot_config(2, 2, {300.0}, 4);
    const WirelessDataset train_set = line_of_sight_set(2, 5000, 81);
    const WirelessDataset test_set = line_of_sight_set(2, 500, 82);
    EstimatorHyper hyper;
    hyper.hidden_layers = 2;
    hyper.hidden_width = 64;
    hyper.learning_rate = 1e-3;
    Rng rng(20);
    const EstimatorNet net = train_estimator(train_set, cfg, 10, rng, hyper);
    Rng eval_rng(21);
    const EvalResult res = eval_mse(net, test_set, cfg, eval_rng);
    REQUIRE(res.points.size() == 1);
    INFO("trained NMSE ", res.points[0].nmse);
    CHECK(res.points[0].nmse < 1e-2);
}

TEST_CASE("training is deterministic given the stream seed") {
    const PilotConfig cfg = make_pilot_config(2, 2, {0.0, 20.0}, 5);
    const WirelessDataset train_set = line_of_sight_set(2, 64, 83);
    EstimatorHyper hyper;
    hyper.hidden_layers = 1;
    hyper.hidden_width = 8;
    Rng r1(22), r2(22);
    const EstimatorNet a = train_estimator(train_set, cfg, 2, r1, hyper);
    const EstimatorNet b = train_estimator(train_set, cfg, 2, r2, hyper);
    CHECK(a.params == b.params);
    CHECK(a.ref_power == b.ref_power);
}

TEST_CASE("estimator checkpoints restore parameters and reference power") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() /
                         ("wdc_test_estimator_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string path = (dir / "net.wck1").string();

    const PilotConfig cfg = make_pilot_config(2, 2, {10.0}, 6);
    const WirelessDataset train_set = line_of_sight_set(2, 64, 84);
    EstimatorHyper hyper;
    hyper.hidden_layers = 1;
    hyper.hidden_width = 8;
    Rng rng(23);
    const EstimatorNet net = train_estimator(train_set, cfg, 1, rng, hyper);
    save_estimator(net, path);

    const EstimatorNet back = load_estimator(path, cfg, hyper);
    CHECK(back.params == net.params);
    CHECK(back.ref_power == net.ref_power);

    // A different pilot setup must be refused by digest.
    const PilotConfig other = make_pilot_config(2, 1, {10.0}, 6);
    EstimatorHyper other_hyper = hyper;
    CHECK_THROWS_AS(load_estimator(path, other, other_hyper), CompatibilityError);
    fs::remove_all(dir);
}
