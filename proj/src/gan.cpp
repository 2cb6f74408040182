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

#include "wdc/gan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wdc/dataio.hpp"
#include "wdc/error.hpp"

namespace wdc {

namespace {

constexpr double kClampEps = 1e-12;

double clamp_prob(double p) { return std::clamp(p, kClampEps, 1.0 - kClampEps); }

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

const char* variant_name(GenLossVariant v) {
    return v == GenLossVariant::minimax ? "minimax" : "non_saturating";
}

void check_cond(const GanSpec& spec, const Condition& cond) {
    validate_condition(cond);
    if (static_cast<int>(cond.size()) != spec.num_envs)
        throw InvalidArgument("condition length " + std::to_string(cond.size()) +
                              " does not match num_envs " + std::to_string(spec.num_envs));
}

void check_batch(const GanSpec& spec, const EncodedBatch& batch, const char* what) {
    if (batch.empty()) throw InvalidArgument(std::string(what) + " batch is empty");
    for (const auto& x : batch)
        if (static_cast<int>(x.size()) != spec.data_dim)
            throw InvalidArgument(std::string(what) + " batch vector length " +
                                  std::to_string(x.size()) + " does not match data_dim " +
                                  std::to_string(spec.data_dim));
}

}  // namespace

Condition make_condition(int index, int num_envs) {
    if (num_envs < 1) throw InvalidArgument("make_condition: num_envs must be >= 1");
    if (index < 0 || index >= num_envs)
        throw InvalidArgument("make_condition: index " + std::to_string(index) +
                              " out of range [0, " + std::to_string(num_envs) + ")");
    Condition cond(static_cast<std::size_t>(num_envs), 0.0);
    cond[static_cast<std::size_t>(index)] = 1.0;
    return cond;
}

void validate_condition(const Condition& cond) {
    if (cond.empty()) throw InvalidArgument("condition is empty");
    int ones = 0;
    for (double v : cond) {
        if (v != 0.0 && v != 1.0)
            throw InvalidArgument("condition entries must be 0 or 1");
        if (v == 1.0) ++ones;
    }
    if (ones != 1)
        throw InvalidArgument("condition must have exactly one 1, found " + std::to_string(ones));
}

int condition_hot_index(const Condition& cond) {
    validate_condition(cond);
    for (std::size_t i = 0; i < cond.size(); ++i)
        if (cond[i] == 1.0) return static_cast<int>(i);
    throw InvalidArgument("condition has no hot entry");  // unreachable after validation
}

void GanSpec::validate() const {
    if (noise_dim < 1) throw InvalidArgument("GanSpec: noise_dim must be >= 1");
    if (num_envs < 1) throw InvalidArgument("GanSpec: num_envs must be >= 1");
    if (data_dim < 1) throw InvalidArgument("GanSpec: data_dim must be >= 1");
    gen_spec.validate();
    disc_spec.validate();
    if (gen_spec.input_width() != noise_dim + num_envs)
        throw InvalidArgument("GanSpec: generator input width must be noise_dim + num_envs");
    if (gen_spec.output_width() != data_dim)
        throw InvalidArgument("GanSpec: generator output width must be data_dim");
    if (gen_spec.output != OutputAct::linear)
        throw InvalidArgument("GanSpec: generator output must be linear");
    if (disc_spec.input_width() != data_dim + num_envs)
        throw InvalidArgument("GanSpec: discriminator input width must be data_dim + num_envs");
    if (disc_spec.output_width() != 1 || disc_spec.output != OutputAct::sigmoid)
        throw InvalidArgument("GanSpec: discriminator output must be a single sigmoid unit");
}

std::string GanSpec::canonical() const {
    std::ostringstream out;
    out << "gan{noise_dim=" << noise_dim << ",num_envs=" << num_envs << ",data_dim=" << data_dim
        << ",loss=" << variant_name(loss_variant) << ",gen=" << gen_spec.canonical()
        << ",disc=" << disc_spec.canonical() << "}";
    return out.str();
}

GanSpec make_gan_spec(int noise_dim, int num_envs, int data_dim,
                      const std::vector<int>& gen_hidden, const std::vector<int>& disc_hidden,
                      GenLossVariant loss_variant) {
    GanSpec spec;
    spec.noise_dim = noise_dim;
    spec.num_envs = num_envs;
    spec.data_dim = data_dim;
    spec.loss_variant = loss_variant;

    spec.gen_spec.widths.clear();
    spec.gen_spec.widths.push_back(noise_dim + num_envs);
    spec.gen_spec.widths.insert(spec.gen_spec.widths.end(), gen_hidden.begin(), gen_hidden.end());
    spec.gen_spec.widths.push_back(data_dim);
    spec.gen_spec.hidden = HiddenAct::relu;
    spec.gen_spec.output = OutputAct::linear;

    spec.disc_spec.widths.clear();
    spec.disc_spec.widths.push_back(data_dim + num_envs);
    spec.disc_spec.widths.insert(spec.disc_spec.widths.end(), disc_hidden.begin(),
                                 disc_hidden.end());
    spec.disc_spec.widths.push_back(1);
    spec.disc_spec.hidden = HiddenAct::leaky_relu;
    spec.disc_spec.leaky_slope = 0.2;
    spec.disc_spec.output = OutputAct::sigmoid;

    spec.validate();
    return spec;
}

void GanPair::validate() const {
    spec.validate();
    if (gen_params.size() != spec.gen_spec.param_count())
        throw InvalidArgument("GanPair: generator parameter count mismatch");
    if (disc_params.size() != spec.disc_spec.param_count())
        throw InvalidArgument("GanPair: discriminator parameter count mismatch");
}

GanPair init_gan(const GanSpec& spec, std::uint64_t seed, const OptimizerState& gen_opt,
                 const OptimizerState& disc_opt) {
    spec.validate();
    GanPair pair;
    pair.spec = spec;
    Rng gen_rng(derive_seed(seed, 0));
    Rng disc_rng(derive_seed(seed, 1));
    pair.gen_params = init_params(spec.gen_spec, gen_rng);
    pair.disc_params = init_params(spec.disc_spec, disc_rng);
    pair.gen_opt = gen_opt;
    pair.disc_opt = disc_opt;
    return pair;
}

double cross_entropy(int label, double prediction) {
    if (label != 0 && label != 1) throw InvalidArgument("cross_entropy: label must be 0 or 1");
    const double p = clamp_prob(prediction);
    return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

std::vector<double> draw_noise(Rng& rng, int noise_dim) {
    if (noise_dim < 1) throw InvalidArgument("draw_noise: noise_dim must be >= 1");
    std::vector<double> z(static_cast<std::size_t>(noise_dim));
    for (double& v : z) v = rng.gaussian();
    return z;
}

std::vector<std::vector<double>> draw_noise_batch(Rng& rng, int noise_dim, int count) {
    if (count < 1) throw InvalidArgument("draw_noise_batch: count must be >= 1");
    std::vector<std::vector<double>> batch(static_cast<std::size_t>(count));
    for (auto& z : batch) z = draw_noise(rng, noise_dim);
    return batch;
}

EncodedBatch sample_batch(const WirelessDataset& ds, int batch_size, Rng& rng) {
    if (batch_size < 1) throw InvalidArgument("sample_batch: batch_size must be >= 1");
    if (ds.samples.empty()) throw InvalidArgument("sample_batch: dataset is empty");
    EncodedBatch batch(static_cast<std::size_t>(batch_size));
    for (auto& x : batch) {
        const std::size_t i = rng.uniform_index(ds.samples.size());
        x = flatten(ds.samples[i]);
    }
    return batch;
}

double disc_loss(const GanPair& pair, const EncodedBatch& real_batch,
                 const EncodedBatch& fake_batch, const Condition& cond) {
    check_cond(pair.spec, cond);
    check_batch(pair.spec, real_batch, "real");
    check_batch(pair.spec, fake_batch, "fake");

    double real_sum = 0.0;
    for (const auto& x : real_batch)
        real_sum += cross_entropy(1, forward(pair.spec.disc_spec, pair.disc_params,
                                             concat(x, cond))[0]);
    double fake_sum = 0.0;
    for (const auto& x : fake_batch)
        fake_sum += cross_entropy(0, forward(pair.spec.disc_spec, pair.disc_params,
                                             concat(x, cond))[0]);
    return real_sum / static_cast<double>(real_batch.size()) +
           fake_sum / static_cast<double>(fake_batch.size());
}

double gen_loss(const GanPair& pair, const std::vector<std::vector<double>>& noise_batch,
                const Condition& cond) {
    check_cond(pair.spec, cond);
    if (noise_batch.empty()) throw InvalidArgument("gen_loss: noise batch is empty");

    double sum = 0.0;
    for (const auto& z : noise_batch) {
        if (static_cast<int>(z.size()) != pair.spec.noise_dim)
            throw InvalidArgument("gen_loss: noise vector length mismatch");
        const auto g = forward(pair.spec.gen_spec, pair.gen_params, concat(z, cond));
        const double p = clamp_prob(
            forward(pair.spec.disc_spec, pair.disc_params, concat(g, cond))[0]);
        sum += (pair.spec.loss_variant == GenLossVariant::minimax) ? std::log(1.0 - p)
                                                                   : -std::log(p);
    }
    return sum / static_cast<double>(noise_batch.size());
}

LossGrad disc_loss_grad(const GanPair& pair, const EncodedBatch& real_batch,
                        const EncodedBatch& fake_batch, const Condition& cond) {
    check_cond(pair.spec, cond);
    check_batch(pair.spec, real_batch, "real");
    check_batch(pair.spec, fake_batch, "fake");

    LossGrad out;
    out.grad.assign(pair.disc_params.size(), 0.0);

    const auto accumulate = [&](const EncodedBatch& batch, int label) {
        const double inv_m = 1.0 / static_cast<double>(batch.size());
        double sum = 0.0;
        for (const auto& x : batch) {
            ForwardTrace trace;
            const auto in = concat(x, cond);
            const double p =
                forward(pair.spec.disc_spec, pair.disc_params, in, &trace)[0];
            sum += cross_entropy(label, p);
            const double pc = clamp_prob(p);
            // d/dp of the per-sample cross-entropy, at the clamped value.
            const double dp = (label == 1 ? -1.0 / pc : 1.0 / (1.0 - pc)) * inv_m;
            const std::vector<double> og{dp};
            const auto g = backward(pair.spec.disc_spec, pair.disc_params, trace, og);
            for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += g.params[i];
        }
        return sum * inv_m;
    };

    out.loss = accumulate(real_batch, 1) + accumulate(fake_batch, 0);
    return out;
}

LossGrad gen_loss_grad(const GanPair& pair, const std::vector<std::vector<double>>& noise_batch,
                       const Condition& cond) {
    check_cond(pair.spec, cond);
    if (noise_batch.empty()) throw InvalidArgument("gen_loss_grad: noise batch is empty");

    LossGrad out;
    out.grad.assign(pair.gen_params.size(), 0.0);
    const double inv_m = 1.0 / static_cast<double>(noise_batch.size());

    double sum = 0.0;
    for (const auto& z : noise_batch) {
        if (static_cast<int>(z.size()) != pair.spec.noise_dim)
            throw InvalidArgument("gen_loss_grad: noise vector length mismatch");
        ForwardTrace gen_trace;
        const auto gen_in = concat(z, cond);
        const auto g = forward(pair.spec.gen_spec, pair.gen_params, gen_in, &gen_trace);

        ForwardTrace disc_trace;
        const auto disc_in = concat(g, cond);
        const double p =
            forward(pair.spec.disc_spec, pair.disc_params, disc_in, &disc_trace)[0];
        const double pc = clamp_prob(p);

        if (pair.spec.loss_variant == GenLossVariant::minimax) {
            sum += std::log(1.0 - pc);
        } else {
            sum += -std::log(pc);
        }
        const double dp = (pair.spec.loss_variant == GenLossVariant::minimax
                               ? -1.0 / (1.0 - pc)
                               : -1.0 / pc) *
                          inv_m;
        const std::vector<double> og{dp};
        const auto disc_grads = backward(pair.spec.disc_spec, pair.disc_params, disc_trace, og);
        // The condition entries of the discriminator input are constants;
        // only the generator-output slice of the input gradient chains back.
        const std::span<const double> d_gen_out(disc_grads.input.data(),
                                                static_cast<std::size_t>(pair.spec.data_dim));
        const auto gen_grads = backward(pair.spec.gen_spec, pair.gen_params, gen_trace, d_gen_out);
        for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += gen_grads.params[i];
    }
    out.loss = sum * inv_m;
    return out;
}

GanStepResult gan_step(const GanPair& pair, const EncodedBatch& real_batch, const Condition& cond,
                       Rng& rng) {
    check_cond(pair.spec, cond);
    check_batch(pair.spec, real_batch, "real");
    const int m = static_cast<int>(real_batch.size());

    // Discriminator update against fakes from the current generator.
    const auto disc_noise = draw_noise_batch(rng, pair.spec.noise_dim, m);
    EncodedBatch fakes(disc_noise.size());
    for (std::size_t i = 0; i < disc_noise.size(); ++i)
        fakes[i] = forward(pair.spec.gen_spec, pair.gen_params, concat(disc_noise[i], cond));
    const auto d = disc_loss_grad(pair, real_batch, fakes, cond);

    GanPair next = pair;
    auto [disc_params, disc_opt] = optimizer_step(pair.disc_opt, pair.disc_params, d.grad);
    next.disc_params = std::move(disc_params);
    next.disc_opt = std::move(disc_opt);

    // Generator update through the updated discriminator, on fresh noise.
    const auto gen_noise = draw_noise_batch(rng, pair.spec.noise_dim, m);
    const auto g = gen_loss_grad(next, gen_noise, cond);
    auto [gen_params, gen_opt] = optimizer_step(next.gen_opt, next.gen_params, g.grad);
    next.gen_params = std::move(gen_params);
    next.gen_opt = std::move(gen_opt);

    // Post-update losses on the same real batch and the generator noise.
    GanStepResult result;
    EncodedBatch fakes_post(gen_noise.size());
    for (std::size_t i = 0; i < gen_noise.size(); ++i)
        fakes_post[i] = forward(next.spec.gen_spec, next.gen_params, concat(gen_noise[i], cond));
    result.disc_loss_value = disc_loss(next, real_batch, fakes_post, cond);
    result.gen_loss_value = gen_loss(next, gen_noise, cond);
    result.pair = std::move(next);
    return result;
}

WirelessDataset synthesize(const GanPair& pair, const Condition& cond, int n, double scale,
                           Rng& rng) {
    pair.validate();
    check_cond(pair.spec, cond);
    if (n < 1) throw InvalidArgument("synthesize: n must be >= 1");
    if (!(scale > 0.0)) throw InvalidArgument("synthesize: scale must be positive");
    if (pair.spec.data_dim % 2 != 0)
        throw InvalidArgument("synthesize: data_dim must be even to decode interleaved Re/Im");

    WirelessDataset ds;
    ds.nt = pair.spec.data_dim / 2;
    ds.condition_index = condition_hot_index(cond);
    ds.scale = scale;
    ds.meta["source"] = "synthesized";
    ds.meta["generator_digest"] = digest_hex(gan_digest(pair));

    ds.samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto z = draw_noise(rng, pair.spec.noise_dim);
        // Generator outputs live in encoded units, which is exactly the
        // dataset's stored representation under the same scale.
        ds.samples.push_back(
            unflatten(forward(pair.spec.gen_spec, pair.gen_params, concat(z, cond))));
    }
    return ds;
}

std::uint64_t gan_digest(const GanPair& pair) {
    const std::string text =
        pair.spec.canonical() + "|gen:" + digest_hex(fnv1a64(std::span<const double>(pair.gen_params))) +
        "|disc:" + digest_hex(fnv1a64(std::span<const double>(pair.disc_params)));
    return fnv1a64(text);
}

void save_gan(const GanPair& pair, const std::string& path) {
    pair.validate();
    ParamVector all;
    all.reserve(pair.gen_params.size() + pair.disc_params.size());
    all.insert(all.end(), pair.gen_params.begin(), pair.gen_params.end());
    all.insert(all.end(), pair.disc_params.begin(), pair.disc_params.end());
    save_checkpoint(fnv1a64(pair.spec.canonical()), all, path);
}

GanPair load_gan(const std::string& path, const GanSpec& spec, const OptimizerState& gen_opt,
                 const OptimizerState& disc_opt) {
    spec.validate();
    const ParamVector all = load_checkpoint(path, fnv1a64(spec.canonical()));
    const std::size_t gen_count = spec.gen_spec.param_count();
    const std::size_t disc_count = spec.disc_spec.param_count();
    if (all.size() != gen_count + disc_count)
        throw CorruptionError(path + ": checkpoint holds " + std::to_string(all.size()) +
                              " parameters, expected " + std::to_string(gen_count + disc_count));
    GanPair pair;
    pair.spec = spec;
    pair.gen_params.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(gen_count));
    pair.disc_params.assign(all.begin() + static_cast<std::ptrdiff_t>(gen_count), all.end());
    pair.gen_opt = gen_opt;
    pair.disc_opt = disc_opt;
    return pair;
}

}  // namespace wdc
