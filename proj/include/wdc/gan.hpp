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
#include <string>
#include <vector>

#include "wdc/dataset.hpp"
#include "wdc/mlp.hpp"
#include "wdc/optim.hpp"
#include "wdc/rng.hpp"

namespace wdc {

/// One-hot environment indicator of length num_envs.
using Condition = std::vector<double>;

/// Batch of encoded (interleaved Re/Im, scale-normalized) channel vectors.
using EncodedBatch = std::vector<std::vector<double>>;

Condition make_condition(int index, int num_envs);
void validate_condition(const Condition& cond);
int condition_hot_index(const Condition& cond);

enum class GenLossVariant { minimax, non_saturating };

struct GanSpec {
    int noise_dim = 8;
    int num_envs = 5;
    int data_dim = 16;
    MlpSpec gen_spec;   // input noise_dim + num_envs, output data_dim, linear
    MlpSpec disc_spec;  // input data_dim + num_envs, output 1, sigmoid
    GenLossVariant loss_variant = GenLossVariant::non_saturating;

    void validate() const;
    /// Key-sorted text form; its fnv1a64 hash keys checkpoints.
    std::string canonical() const;
};

/// Builds the default architecture for the given sizes: generator and
/// discriminator each use the given hidden widths, generator hidden ReLU
/// with linear output, discriminator hidden LeakyReLU(0.2) with sigmoid
/// output.
GanSpec make_gan_spec(int noise_dim, int num_envs, int data_dim,
                                            const std::vector<int>& gen_hidden,
                                            const std::vector<int>& disc_hidden,
                                            GenLossVariant loss_variant = GenLossVariant::non_saturating);

/// Immutable generator/discriminator pair. Training steps return a new
/// value; nothing here is mutated in place.
struct GanPair {
    GanSpec spec;
    ParamVector gen_params;
    ParamVector disc_params;
    OptimizerState gen_opt;
    OptimizerState disc_opt;

    void validate() const;
};

/// Fresh pair with He-uniform weights: generator drawn from
/// derive_seed(seed, 0), discriminator from derive_seed(seed, 1).
GanPair init_gan(const GanSpec& spec, std::uint64_t seed,
                                  const OptimizerState& gen_opt, const OptimizerState& disc_opt);

/// Binary cross-entropy with the prediction clamped to
/// [1e-12, 1 - 1e-12], so boundary predictions stay finite.
double cross_entropy(int label, double prediction);

/// Noise vectors are i.i.d. standard normal, entries drawn in order.
std::vector<double> draw_noise(Rng& rng, int noise_dim);
std::vector<std::vector<double>> draw_noise_batch(Rng& rng, int noise_dim, int count);

/// Uniform-with-replacement minibatch of encoded samples from `ds`.
EncodedBatch sample_batch(const WirelessDataset& ds, int batch_size, Rng& rng);

/// Discriminator objective: mean cross_entropy(1, D([x; c])) over
/// real_batch plus mean cross_entropy(0, D([x; c])) over fake_batch.
/// fake_batch holds already-generated encoded vectors.
double disc_loss(const GanPair& pair, const EncodedBatch& real_batch,
                                  const EncodedBatch& fake_batch, const Condition& cond);

/// Generator objective on D(G([z; c])|c): minimax variant is
/// mean log(1 - D(.)), non_saturating is mean -log D(.).
double gen_loss(const GanPair& pair, const std::vector<std::vector<double>>& noise_batch,
                                const Condition& cond);

struct LossGrad {
    double loss = 0.0;
    ParamVector grad;
};

/// disc_loss with its gradient w.r.t. the discriminator parameters.
LossGrad disc_loss_grad(const GanPair& pair, const EncodedBatch& real_batch,
                                                const EncodedBatch& fake_batch, const Condition& cond);

/// gen_loss with its gradient w.r.t. the generator parameters; the
/// gradient is chained through the (fixed) discriminator.
LossGrad gen_loss_grad(const GanPair& pair, const std::vector<std::vector<double>>& noise_batch,
                                              const Condition& cond);

struct GanStepResult {
    GanPair pair;
    double disc_loss_value = 0.0;
    double gen_loss_value = 0.0;
};

/// One alternating update: the discriminator steps against fresh fakes,
/// then the generator steps (through the updated discriminator) on fresh
/// noise. Reported losses are evaluated after both updates on the same
/// real batch and the generator-update noise.
GanStepResult gan_step(const GanPair& pair, const EncodedBatch& real_batch,
                                              const Condition& cond, Rng& rng);

/// n generator evaluations on fresh noise; outputs are decoded with the
/// given scale and tagged with provenance and the generator digest.
WirelessDataset synthesize(const GanPair& pair, const Condition& cond, int n, double scale,
                                                      Rng& rng);

/// Hash of the spec and both parameter vectors (bit patterns included).
std::uint64_t gan_digest(const GanPair& pair);

/// Both parameter vectors in one checkpoint, keyed by the spec digest.
void save_gan(const GanPair& pair, const std::string& path);

/// Restores parameters into a pair built from `spec` with the given
/// optimizer states. Throws CompatibilityError when the checkpoint was
/// written for a different spec.
GanPair load_gan(const std::string& path, const GanSpec& spec,
                                  const OptimizerState& gen_opt, const OptimizerState& disc_opt);

}  // namespace wdc
