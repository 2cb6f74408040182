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

#include "wdc/meta.hpp"

#include <algorithm>
#include <cmath>

#include "wdc/error.hpp"
#include "wdc/metrics.hpp"

namespace wdc {

namespace {

// Fakes from the pair's generator on fresh noise, one per batch slot.
EncodedBatch make_fakes(const GanPair& pair, const Condition& cond, int count, Rng& rng) {
    const auto noise = draw_noise_batch(rng, pair.spec.noise_dim, count);
    EncodedBatch fakes(noise.size());
    for (std::size_t i = 0; i < noise.size(); ++i) {
        std::vector<double> in(noise[i]);
        in.insert(in.end(), cond.begin(), cond.end());
        fakes[i] = forward(pair.spec.gen_spec, pair.gen_params, in);
    }
    return fakes;
}

// Held-out discriminator loss at theta, averaged over environments.
double validation_loss(const GanPair& pair, const std::vector<WirelessDataset>& datasets,
                       const std::vector<Condition>& conds, int batch_size, Rng& rng) {
    double sum = 0.0;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const int m = std::min<int>(batch_size, static_cast<int>(datasets[i].samples.size()));
        const EncodedBatch real = sample_batch(datasets[i], m, rng);
        const EncodedBatch fakes = make_fakes(pair, conds[i], m, rng);
        sum += disc_loss(pair, real, fakes, conds[i]);
    }
    return sum / static_cast<double>(datasets.size());
}

std::vector<double> synthesized_path_gains(const GanPair& pair,
                                           const std::vector<Condition>& conds,
                                           const std::vector<double>& scales, int n, Rng& rng) {
    std::vector<double> gains;
    gains.reserve(conds.size());
    for (std::size_t i = 0; i < conds.size(); ++i) {
        const WirelessDataset synth = synthesize(pair, conds[i], n, scales[i], rng);
        gains.push_back(path_gain(synth));
    }
    return gains;
}

}  // namespace

void MetaConfig::validate() const {
    // Zero step sizes are admitted so the degenerate identities
    // (beta = 0 keeps theta, gamma = 0 keeps the pair) stay expressible.
    if (!(alpha >= 0.0)) throw InvalidArgument("MetaConfig: alpha must be >= 0");
    if (!(beta >= 0.0)) throw InvalidArgument("MetaConfig: beta must be >= 0");
    if (!(gamma >= 0.0)) throw InvalidArgument("MetaConfig: gamma must be >= 0");
    if (inner_steps < 1) throw InvalidArgument("MetaConfig: inner_steps must be >= 1");
    if (meta_iters < 0) throw InvalidArgument("MetaConfig: meta_iters must be >= 0");
    if (fine_tune_iters < 0) throw InvalidArgument("MetaConfig: fine_tune_iters must be >= 0");
    if (batch_size < 1) throw InvalidArgument("MetaConfig: batch_size must be >= 1");
    if (log_interval < 1) throw InvalidArgument("MetaConfig: log_interval must be >= 1");
    if (eval_samples < 1) throw InvalidArgument("MetaConfig: eval_samples must be >= 1");
}

GanPair inner_adapt(const GanPair& pair, const WirelessDataset& dataset, const Condition& cond,
                    double alpha, int steps, Rng& rng, int batch_size) {
    if (dataset.samples.empty()) throw InvalidArgument("inner_adapt: dataset is empty");
    if (steps < 0) throw InvalidArgument("inner_adapt: steps must be >= 0");
    if (batch_size < 1) throw InvalidArgument("inner_adapt: batch_size must be >= 1");

    GanPair adapted = pair;
    adapted.gen_opt = OptimizerState::make_sgd(alpha);
    adapted.disc_opt = OptimizerState::make_sgd(alpha);
    const int m = std::min<int>(batch_size, static_cast<int>(dataset.samples.size()));
    for (int s = 0; s < steps; ++s) {
        const EncodedBatch real = sample_batch(dataset, m, rng);
        adapted = gan_step(adapted, real, cond, rng).pair;
    }
    return adapted;
}

MetaStepResult meta_step(const GanPair& pair, const std::vector<WirelessDataset>& datasets,
                         const std::vector<Condition>& conds, const MetaConfig& cfg, Rng& rng) {
    if (datasets.empty()) throw InvalidArgument("meta_step: no datasets");
    if (datasets.size() != conds.size())
        throw InvalidArgument("meta_step: datasets and conditions differ in count");
    cfg.validate();

    ParamVector gen_sum(pair.gen_params.size(), 0.0);
    ParamVector disc_sum(pair.disc_params.size(), 0.0);

    MetaStepResult result;
    result.record.inner_losses.reserve(datasets.size());

    for (std::size_t i = 0; i < datasets.size(); ++i) {
        // Algorithm lines 4-6: adapt on inner batches.
        const GanPair adapted =
            inner_adapt(pair, datasets[i], conds[i], cfg.alpha, cfg.inner_steps, rng,
                        cfg.batch_size);

        // Line 7: a fresh meta-update batch, disjoint draw from the same set.
        const int m = std::min<int>(cfg.batch_size, static_cast<int>(datasets[i].samples.size()));
        const EncodedBatch meta_real = sample_batch(datasets[i], m, rng);
        const EncodedBatch meta_fakes = make_fakes(adapted, conds[i], m, rng);
        const auto d = disc_loss_grad(adapted, meta_real, meta_fakes, conds[i]);

        const auto gen_noise = draw_noise_batch(rng, pair.spec.noise_dim, m);
        const auto g = gen_loss_grad(adapted, gen_noise, conds[i]);

        for (std::size_t j = 0; j < disc_sum.size(); ++j) disc_sum[j] += d.grad[j];
        for (std::size_t j = 0; j < gen_sum.size(); ++j) gen_sum[j] += g.grad[j];
        result.record.inner_losses.push_back(d.loss);
        result.record.meta_loss += d.loss;
    }

    // Line 9: descend the summed adapted-loss gradients at theta.
    GanPair next = pair;
    for (std::size_t j = 0; j < next.disc_params.size(); ++j) {
        if (!std::isfinite(disc_sum[j]))
            throw NumericError("meta_step: non-finite discriminator meta gradient");
        next.disc_params[j] -= cfg.beta * disc_sum[j];
    }
    for (std::size_t j = 0; j < next.gen_params.size(); ++j) {
        if (!std::isfinite(gen_sum[j]))
            throw NumericError("meta_step: non-finite generator meta gradient");
        next.gen_params[j] -= cfg.beta * gen_sum[j];
    }
    result.pair = std::move(next);
    return result;
}

namespace {

// Step-size taper shared by the closed training loops. The adversarial
// gradient field rotates around the equilibrium rather than pointing at
// it, so a constant-step loop terminates at an arbitrary phase of that
// orbit. Shrinking the step lets the iterate track the orbit center:
// full size for the first half of the run, linear to 30% at 70%, then
// linear to zero at the end.
double step_taper(int t, int total) {
    if (total <= 0) return 1.0;
    const double half = 0.5 * total;
    const double knee = 0.7 * total;
    if (t <= half) return 1.0;
    if (t <= knee) return 1.0 - 0.7 * (t - half) / (knee - half);
    return 0.3 * (total - t) / (total - knee);
}

}  // namespace

std::pair<GanPair, MetaTrace> meta_train(const GanSpec& spec,
                                         const std::vector<WirelessDataset>& datasets,
                                         const std::vector<Condition>& conds,
                                         const MetaConfig& cfg) {
    if (datasets.empty()) throw InvalidArgument("meta_train: no datasets");
    if (datasets.size() != conds.size())
        throw InvalidArgument("meta_train: datasets and conditions differ in count");
    cfg.validate();

    GanPair pair = init_gan(spec, derive_seed(cfg.seed, 0), OptimizerState::make_sgd(cfg.beta),
                            OptimizerState::make_sgd(cfg.beta));
    Rng train_rng(derive_seed(cfg.seed, 1));
    Rng eval_rng(derive_seed(cfg.seed, 2));

    std::vector<double> scales(datasets.size());
    for (std::size_t i = 0; i < datasets.size(); ++i) scales[i] = datasets[i].scale;

    MetaTrace trace;
    const auto log_point = [&](int iteration, const MetaRecord& step_record) {
        MetaRecord rec = step_record;
        rec.iteration = iteration;
        rec.validation_loss = validation_loss(pair, datasets, conds, cfg.batch_size, eval_rng);
        rec.path_gains =
            synthesized_path_gains(pair, conds, scales, cfg.eval_samples, eval_rng);
        trace.records.push_back(std::move(rec));
    };

    // Iteration-0 record: the meta objective at the initialization,
    // measured with the evaluation stream so training draws stay put.
    {
        MetaRecord init_rec;
        for (std::size_t i = 0; i < datasets.size(); ++i) {
            const GanPair adapted = inner_adapt(pair, datasets[i], conds[i], cfg.alpha,
                                                cfg.inner_steps, eval_rng, cfg.batch_size);
            const int m =
                std::min<int>(cfg.batch_size, static_cast<int>(datasets[i].samples.size()));
            const EncodedBatch real = sample_batch(datasets[i], m, eval_rng);
            const EncodedBatch fakes = make_fakes(adapted, conds[i], m, eval_rng);
            const double loss = disc_loss(adapted, real, fakes, conds[i]);
            init_rec.inner_losses.push_back(loss);
            init_rec.meta_loss += loss;
        }
        log_point(0, init_rec);
    }

    MetaConfig step_cfg = cfg;
    for (int t = 1; t <= cfg.meta_iters; ++t) {
        step_cfg.beta = cfg.beta * step_taper(t, cfg.meta_iters);
        MetaStepResult step = meta_step(pair, datasets, conds, step_cfg, train_rng);
        pair = std::move(step.pair);
        if (t % cfg.log_interval == 0) log_point(t, step.record);
    }
    return {std::move(pair), std::move(trace)};
}

std::pair<GanPair, std::vector<FineTuneRecord>> fine_tune(const GanPair& pair,
                                                          const WirelessDataset& dataset_target,
                                                          const Condition& cond_target,
                                                          const MetaConfig& cfg, Rng& rng) {
    if (dataset_target.samples.empty()) throw InvalidArgument("fine_tune: target dataset is empty");
    cfg.validate();
    if (cfg.fine_tune_iters == 0) return {pair, {}};

    GanPair tuned = pair;
    tuned.gen_opt = OptimizerState::make_sgd(cfg.gamma);
    tuned.disc_opt = OptimizerState::make_sgd(cfg.gamma);

    std::vector<FineTuneRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.fine_tune_iters));
    const int m = std::min<int>(cfg.batch_size, static_cast<int>(dataset_target.samples.size()));
    for (int t = 1; t <= cfg.fine_tune_iters; ++t) {
        const EncodedBatch real = sample_batch(dataset_target, m, rng);
        GanStepResult step = gan_step(tuned, real, cond_target, rng);
        tuned = std::move(step.pair);
        records.push_back({t, step.disc_loss_value, step.gen_loss_value});
    }
    return {std::move(tuned), std::move(records)};
}

ParamVector inner_adapt_vector(const ParamVector& theta, const TaskGrad& task, double alpha,
                               int steps) {
    if (steps < 0) throw InvalidArgument("inner_adapt_vector: steps must be >= 0");
    ParamVector psi = theta;
    for (int s = 0; s < steps; ++s) {
        const ParamVector g = task.grad(psi);
        if (g.size() != psi.size())
            throw InvalidArgument("inner_adapt_vector: gradient length mismatch");
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] -= alpha * g[i];
    }
    return psi;
}

ParamVector first_order_meta_update(const ParamVector& theta, const std::vector<TaskGrad>& tasks,
                                    double alpha, double beta, int inner_steps) {
    if (tasks.empty()) throw InvalidArgument("first_order_meta_update: no tasks");
    ParamVector sum(theta.size(), 0.0);
    for (const auto& task : tasks) {
        const ParamVector psi = inner_adapt_vector(theta, task, alpha, inner_steps);
        const ParamVector g = task.grad(psi);
        if (g.size() != theta.size())
            throw InvalidArgument("first_order_meta_update: gradient length mismatch");
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += g[i];
    }
    ParamVector next = theta;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] -= beta * sum[i];
    return next;
}

}  // namespace wdc
