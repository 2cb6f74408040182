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
#include <vector>

#include "wdc/channel.hpp"
#include "wdc/dataio.hpp"
#include "wdc/error.hpp"
#include "wdc/meta.hpp"

using namespace wdc;

namespace {

GanSpec small_spec() { return make_gan_spec(3, 2, 4, {8, 8}, {8, 8}); }

WirelessDataset small_dataset(double freq_ghz, int condition, std::uint64_t seed) {
    ChannelConfig cfg;
    cfg.nt = 2;
    cfg.center_freq_ghz = freq_ghz;
    cfg.seed = seed;
    return generate_dataset(cfg, 64, condition);
}

std::uint64_t params_digest(const GanPair& pair) {
    return fnv1a64(std::span<const double>(pair.gen_params)) ^
           fnv1a64(std::span<const double>(pair.disc_params));
}

// Quadratic task centered at `center`: loss 0.5*||theta - center||^2.
TaskGrad quadratic_task(const ParamVector& center) {
    return TaskGrad{
        [center](const ParamVector& theta) {
            double acc = 0.0;
            for (std::size_t i = 0; i < theta.size(); ++i) {
                const double d = theta[i] - center[i];
                acc += d * d;
            }
            return acc / 2.0;
        },
        [center](const ParamVector& theta) {
            ParamVector g(theta.size());
            for (std::size_t i = 0; i < theta.size(); ++i) g[i] = theta[i] - center[i];
            return g;
        },
    };
}

}  // namespace

TEST_CASE("meta config validation accepts zero step sizes but not negatives") {
    MetaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 0.0;
    cfg.beta = 0.0;
    cfg.gamma = 0.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = -0.1;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = MetaConfig{};
    cfg.inner_steps = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = MetaConfig{};
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("inner_adapt with zero step size leaves the parameters in place") {
    const GanSpec spec = small_spec();
    const GanPair pair = init_gan(spec, 3, OptimizerState::make_sgd(0.1),
                                  OptimizerState::make_sgd(0.1));
    const WirelessDataset ds = small_dataset(28.0, 0, 5);
    Rng rng(7);
    const GanPair adapted = inner_adapt(pair, ds, make_condition(0, 2), 0.0, 2, rng, 16);
    CHECK(adapted.gen_params == pair.gen_params);
    CHECK(adapted.disc_params == pair.disc_params);
}

TEST_CASE("inner_adapt moves parameters when the step size is positive") {
    const GanSpec spec = small_spec();
    const GanPair pair = init_gan(spec, 3, OptimizerState::make_sgd(0.1),
                                  OptimizerState::make_sgd(0.1));
    const WirelessDataset ds = small_dataset(28.0, 0, 5);
    Rng rng(7);
    const std::uint64_t before = params_digest(pair);
    const GanPair adapted = inner_adapt(pair, ds, make_condition(0, 2), 0.05, 1, rng, 16);
    CHECK(params_digest(adapted) != before);
    // Value semantics: the input pair is untouched.
    CHECK(params_digest(pair) == before);
    CHECK_THROWS_AS(inner_adapt(pair, WirelessDataset{}, make_condition(0, 2), 0.05, 1, rng, 16),
                    InvalidArgument);
}

TEST_CASE("meta_step with zero meta rate is the identity on parameters") {
    const GanSpec spec = small_spec();
    const GanPair pair = init_gan(spec, 11, OptimizerState::make_sgd(0.1),
                                  OptimizerState::make_sgd(0.1));
    const std::vector<WirelessDataset> sets = {small_dataset(28.0, 0, 13),
                                               small_dataset(37.0, 1, 17)};
    const std::vector<Condition> conds = {make_condition(0, 2), make_condition(1, 2)};
    MetaConfig cfg;
    cfg.alpha = 0.02;
    cfg.beta = 0.0;
    cfg.batch_size = 16;
    Rng rng(19);
    const MetaStepResult res = meta_step(pair, sets, conds, cfg, rng);
    CHECK(res.pair.gen_params == pair.gen_params);
    CHECK(res.pair.disc_params == pair.disc_params);
    REQUIRE(res.record.inner_losses.size() == 2);
    CHECK(res.record.meta_loss ==
          doctest::Approx(res.record.inner_losses[0] + res.record.inner_losses[1]));
}

TEST_CASE("meta_step with one task and no adaptation is a plain gradient step") {
    const GanSpec spec = small_spec();
    const GanPair pair = init_gan(spec, 23, OptimizerState::make_sgd(0.1),
                                  OptimizerState::make_sgd(0.1));
    const WirelessDataset ds = small_dataset(28.0, 0, 29);
    const Condition cond = make_condition(0, 2);
    MetaConfig cfg;
    cfg.alpha = 0.0;
    cfg.beta = 0.01;
    cfg.inner_steps = 1;
    cfg.batch_size = 16;

    Rng r1(31);
    const MetaStepResult res = meta_step(pair, {ds}, {cond}, cfg, r1);

    // Replay the step's documented draw order with a twin stream: the
    // zero-alpha inner phase, the meta batch, discriminator fakes, then
    // the generator noise.
    Rng r2(31);
    const GanPair inner = inner_adapt(pair, ds, cond, 0.0, 1, r2, cfg.batch_size);
    REQUIRE(inner.gen_params == pair.gen_params);

    const EncodedBatch meta_real = sample_batch(ds, cfg.batch_size, r2);
    const auto fake_noise = draw_noise_batch(r2, spec.noise_dim, cfg.batch_size);
    EncodedBatch fakes;
    for (const auto& z : fake_noise) {
        std::vector<double> in(z);
        in.insert(in.end(), cond.begin(), cond.end());
        fakes.push_back(forward(spec.gen_spec, pair.gen_params, in));
    }
    const LossGrad d = disc_loss_grad(pair, meta_real, fakes, cond);
    const auto gen_noise = draw_noise_batch(r2, spec.noise_dim, cfg.batch_size);
    const LossGrad g = gen_loss_grad(pair, gen_noise, cond);

    for (std::size_t i = 0; i < pair.disc_params.size(); ++i)
        CHECK(res.pair.disc_params[i] ==
              doctest::Approx(pair.disc_params[i] - cfg.beta * d.grad[i]).epsilon(1e-15));
    for (std::size_t i = 0; i < pair.gen_params.size(); ++i)
        CHECK(res.pair.gen_params[i] ==
              doctest::Approx(pair.gen_params[i] - cfg.beta * g.grad[i]).epsilon(1e-15));
    CHECK(res.record.meta_loss == doctest::Approx(d.loss));
}

TEST_CASE("meta_train bookkeeping: trace cadence and determinism") {
    const GanSpec spec = small_spec();
    const std::vector<WirelessDataset> sets = {small_dataset(28.0, 0, 37),
                                               small_dataset(37.0, 1, 41)};
    const std::vector<Condition> conds = {make_condition(0, 2), make_condition(1, 2)};
    MetaConfig cfg;
    cfg.alpha = 0.02;
    cfg.beta = 0.01;
    cfg.meta_iters = 10;
    cfg.log_interval = 5;
    cfg.batch_size = 8;
    cfg.eval_samples = 16;
    cfg.seed = 43;

    const auto [pair1, trace1] = meta_train(spec, sets, conds, cfg);
    REQUIRE(trace1.records.size() == 3);  // iterations 0, 5, 10
    CHECK(trace1.records[0].iteration == 0);
    CHECK(trace1.records[1].iteration == 5);
    CHECK(trace1.records[2].iteration == 10);
    for (const auto& rec : trace1.records) {
        CHECK(rec.path_gains.size() == 2);
        CHECK(std::isfinite(rec.validation_loss));
    }

    const auto [pair2, trace2] = meta_train(spec, sets, conds, cfg);
    CHECK(pair1.gen_params == pair2.gen_params);
    CHECK(pair1.disc_params == pair2.disc_params);
    REQUIRE(trace2.records.size() == trace1.records.size());
    for (std::size_t i = 0; i < trace1.records.size(); ++i) {
        CHECK(trace1.records[i].meta_loss == trace2.records[i].meta_loss);
        CHECK(trace1.records[i].validation_loss == trace2.records[i].validation_loss);
        CHECK(trace1.records[i].path_gains == trace2.records[i].path_gains);
    }
}

TEST_CASE("meta_train with zero iterations returns the initialization") {
    const GanSpec spec = small_spec();
    const std::vector<WirelessDataset> sets = {small_dataset(28.0, 0, 47)};
    const std::vector<Condition> conds = {make_condition(0, 2)};
    MetaConfig cfg;
    cfg.meta_iters = 0;
    cfg.seed = 51;
    cfg.eval_samples = 8;

    const auto [pair, trace] = meta_train(spec, sets, conds, cfg);
    const GanPair fresh = init_gan(spec, derive_seed(cfg.seed, 0),
                                   OptimizerState::make_sgd(cfg.beta),
                                   OptimizerState::make_sgd(cfg.beta));
    CHECK(pair.gen_params == fresh.gen_params);
    CHECK(pair.disc_params == fresh.disc_params);
    CHECK(trace.records.size() == 1);
}

TEST_CASE("meta_train rejects mismatched task lists") {
    const GanSpec spec = small_spec();
    MetaConfig cfg;
    CHECK_THROWS_AS(meta_train(spec, {}, {}, cfg), InvalidArgument);
    CHECK_THROWS_AS(meta_train(spec, {small_dataset(28.0, 0, 1)},
                               {make_condition(0, 2), make_condition(1, 2)}, cfg),
                    InvalidArgument);
}

TEST_CASE("fine_tune honors its iteration budget and step size") {
    const GanSpec spec = small_spec();
    const GanPair pair = init_gan(spec, 53, OptimizerState::make_sgd(0.1),
                                  OptimizerState::make_sgd(0.1));
    const WirelessDataset target = small_dataset(39.0, 1, 59);
    const Condition cond = make_condition(1, 2);
    MetaConfig cfg;
    cfg.batch_size = 16;

    SUBCASE("zero iterations: unchanged, empty trace") {
        cfg.fine_tune_iters = 0;
        Rng rng(61);
        const auto [tuned, trace] = fine_tune(pair, target, cond, cfg, rng);
        CHECK(tuned.gen_params == pair.gen_params);
        CHECK(tuned.disc_params == pair.disc_params);
        CHECK(trace.empty());
    }

    SUBCASE("zero step size: unchanged, losses still traced") {
        cfg.fine_tune_iters = 5;
        cfg.gamma = 0.0;
        Rng rng(61);
        const auto [tuned, trace] = fine_tune(pair, target, cond, cfg, rng);
        CHECK(tuned.gen_params == pair.gen_params);
        CHECK(tuned.disc_params == pair.disc_params);
        REQUIRE(trace.size() == 5);
        for (std::size_t i = 0; i < trace.size(); ++i) {
            CHECK(trace[i].iteration == static_cast<int>(i + 1));
            CHECK(std::isfinite(trace[i].disc_loss_value));
            CHECK(std::isfinite(trace[i].gen_loss_value));
        }
    }

    SUBCASE("positive step size moves the parameters deterministically") {
        cfg.fine_tune_iters = 5;
        cfg.gamma = 0.02;
        Rng r1(61), r2(61);
        const auto [a, trace_a] = fine_tune(pair, target, cond, cfg, r1);
        const auto [b, trace_b] = fine_tune(pair, target, cond, cfg, r2);
        CHECK(a.gen_params == b.gen_params);
        CHECK(a.gen_params != pair.gen_params);
        REQUIRE(trace_a.size() == trace_b.size());
        CHECK(trace_a.back().disc_loss_value == trace_b.back().disc_loss_value);
    }

    SUBCASE("empty target dataset is rejected") {
        Rng rng(61);
        CHECK_THROWS_AS(fine_tune(pair, WirelessDataset{}, cond, cfg, rng), InvalidArgument);
    }
}

TEST_CASE("vector inner adaptation matches the closed form on quadratics") {
    const ParamVector theta = {1.0, -2.0, 0.5};
    const ParamVector center = {0.0, 1.0, 0.0};
    const TaskGrad task = quadratic_task(center);
    const double alpha = 0.1;

    // One step: theta - alpha*(theta - center).
    const ParamVector one = inner_adapt_vector(theta, task, alpha, 1);
    for (std::size_t i = 0; i < theta.size(); ++i)
        CHECK(one[i] == doctest::Approx(theta[i] - alpha * (theta[i] - center[i])).epsilon(1e-15));

    // Two steps contract the gap by (1 - alpha)^2.
    const ParamVector two = inner_adapt_vector(theta, task, alpha, 2);
    const double shrink = (1.0 - alpha) * (1.0 - alpha);
    for (std::size_t i = 0; i < theta.size(); ++i)
        CHECK(two[i] ==
              doctest::Approx(center[i] + shrink * (theta[i] - center[i])).epsilon(1e-12));
}

TEST_CASE("first-order meta update matches the analytic direction on quadratics") {
    const ParamVector theta = {2.0, -1.0};
    const std::vector<ParamVector> centers = {{0.0, 0.0}, {1.0, 1.0}, {-1.0, 2.0}};
    std::vector<TaskGrad> tasks;
    for (const auto& c : centers) tasks.push_back(quadratic_task(c));
    const double alpha = 1e-4, beta = 0.01;

    const ParamVector next = first_order_meta_update(theta, tasks, alpha, beta, 1);
    // Post-adaptation gradient of task i at psi_i: (1 - alpha)*(theta - c_i).
    for (std::size_t j = 0; j < theta.size(); ++j) {
        double grad = 0.0;
        for (const auto& c : centers) grad += (1.0 - alpha) * (theta[j] - c[j]);
        CHECK(next[j] == doctest::Approx(theta[j] - beta * grad).epsilon(1e-12));
    }
}

TEST_CASE("first-order direction tracks the composed objective's gradient within 1%") {
    const ParamVector theta = {0.7, -0.4, 1.9, 0.2};
    const std::vector<ParamVector> centers = {
        {1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, -1.0, 0.5}, {-0.5, 0.5, 2.0, -1.0}};
    std::vector<TaskGrad> tasks;
    for (const auto& c : centers) tasks.push_back(quadratic_task(c));
    const double alpha = 1e-4;

    // Composed objective: sum_i L_i(theta - alpha * grad L_i(theta)).
    const auto composed = [&](const ParamVector& t) {
        double acc = 0.0;
        for (const auto& task : tasks) acc += task.loss(inner_adapt_vector(t, task, alpha, 1));
        return acc;
    };
    const ParamVector numeric = finite_diff_grad(composed, theta, 1e-5);

    // The first-order meta gradient is (theta - next)/beta.
    const double beta = 1.0;
    const ParamVector next = first_order_meta_update(theta, tasks, alpha, beta, 1);
    ParamVector meta_grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) meta_grad[i] = (theta[i] - next[i]) / beta;

    double diff_sq = 0.0, ref_sq = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        diff_sq += (meta_grad[i] - numeric[i]) * (meta_grad[i] - numeric[i]);
        ref_sq += numeric[i] * numeric[i];
    }
    CHECK(std::sqrt(diff_sq / ref_sq) < 0.01);
}

TEST_CASE("the meta gradient vanishes at the task-center mean") {
    const std::vector<ParamVector> centers = {{1.0, 3.0}, {-1.0, 1.0}, {3.0, -1.0}};
    ParamVector mean(2, 0.0);
    for (const auto& c : centers)
        for (std::size_t i = 0; i < 2; ++i) mean[i] += c[i] / 3.0;
    std::vector<TaskGrad> tasks;
    for (const auto& c : centers) tasks.push_back(quadratic_task(c));

    const double beta = 0.01;
    const ParamVector next = first_order_meta_update(mean, tasks, 0.05, beta, 1);
    double norm = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double g = (mean[i] - next[i]) / beta;
        norm += g * g;
    }
    CHECK(std::sqrt(norm) < 1e-6);
}
