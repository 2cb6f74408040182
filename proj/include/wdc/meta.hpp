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
#include <functional>
#include <vector>

#include "wdc/gan.hpp"

namespace wdc {

enum class MetaGradMode { first_order };

struct MetaConfig {
    double alpha = 0.01;   // inner-loop step size
    double beta = 0.001;   // meta step size
    double gamma = 0.01;   // fine-tune step size
    int inner_steps = 1;
    int meta_iters = 1000;
    int fine_tune_iters = 500;
    int batch_size = 64;
    MetaGradMode meta_grad_mode = MetaGradMode::first_order;
    std::uint64_t seed = 0;
    int log_interval = 100;  // trace cadence for validation loss and path gain
    int eval_samples = 256;  // synthesized samples per condition at each log point

    void validate() const;
};

/// One logged point of a meta-training run. `inner_losses` holds
/// L_{D_i}(psi_i) on each dataset's meta-update batch; `meta_loss` is
/// their sum, the quantity the meta update descends.
struct MetaRecord {
    int iteration = 0;
    std::vector<double> inner_losses;
    double meta_loss = 0.0;
    double validation_loss = 0.0;          // mean held-out discriminator loss at theta
    std::vector<double> path_gains;        // per-condition synthesized path gain
};

struct MetaTrace {
    std::vector<MetaRecord> records;
};

/// Gradient-descent adaptation of one environment: `steps` alternating
/// GAN steps with plain SGD at step size alpha, minibatches of
/// `batch_size` drawn from `dataset`. The input pair is untouched; the
/// adapted copy is returned.
GanPair inner_adapt(const GanPair& pair, const WirelessDataset& dataset, const Condition& cond,
                    double alpha, int steps, Rng& rng, int batch_size = 64);

struct MetaStepResult {
    GanPair pair;
    MetaRecord record;  // iteration left 0; validation/path gain left empty
};

/// One meta iteration over all M environments: adapt each, evaluate the
/// adapted losses' gradients on fresh meta-update batches, and descend
/// their sum at step size beta. First-order mode: the adapted parameters
/// are treated as constants, so the meta gradient of environment i is the
/// plain gradient of its loss at the adapted point. Generator and
/// discriminator parameter vectors follow this rule independently.
MetaStepResult meta_step(const GanPair& pair, const std::vector<WirelessDataset>& datasets,
                         const std::vector<Condition>& conds, const MetaConfig& cfg, Rng& rng);

/// Full meta-training run from a fresh He-uniform initialization.
/// Deterministic given (cfg.seed, datasets): every random draw derives
/// from cfg.seed, and evaluation draws use a stream separate from the
/// training stream so logging cadence cannot alter the trained
/// parameters. The trace holds one record per log_interval plus the
/// pre-training record at iteration 0.
///
/// The meta step size follows a fixed taper: cfg.beta for the first half
/// of the run, linear to 0.3*beta at 70%, linear to zero at the end. The
/// adversarial meta dynamics orbit the equilibrium instead of settling,
/// and the taper parks the returned parameters at the orbit center
/// rather than at a random phase of the oscillation.
std::pair<GanPair, MetaTrace> meta_train(const GanSpec& spec,
                                         const std::vector<WirelessDataset>& datasets,
                                         const std::vector<Condition>& conds,
                                         const MetaConfig& cfg);

struct FineTuneRecord {
    int iteration = 0;
    double disc_loss_value = 0.0;
    double gen_loss_value = 0.0;
};

/// Target-environment adaptation: fine_tune_iters GAN steps with plain
/// SGD at constant step size gamma, starting from the meta-trained
/// parameters. Unlike meta_train, the step size is not tapered: the run
/// is a short adaptation still inside its transient, and damping it
/// strands the parameters partway to the target environment. With
/// fine_tune_iters = 0 the input pair is returned as-is.
std::pair<GanPair, std::vector<FineTuneRecord>> fine_tune(const GanPair& pair,
                                                          const WirelessDataset& dataset_target,
                                                          const Condition& cond_target,
                                                          const MetaConfig& cfg, Rng& rng);

/// Flat-vector form of the same update rules, for losses supplied as
/// callbacks. This is the arithmetic contract the GAN-level ops follow;
/// keeping it exposed lets analytic objectives (where the exact composed
/// meta gradient is computable) exercise the update directly.
struct TaskGrad {
    std::function<double(const ParamVector&)> loss;
    std::function<ParamVector(const ParamVector&)> grad;
};

/// psi = theta after `steps` SGD steps at alpha on one task's gradient.
ParamVector inner_adapt_vector(const ParamVector& theta, const TaskGrad& task, double alpha,
                               int steps);

/// theta' = theta - beta * sum_i grad_i(psi_i), psi_i from inner_adapt_vector.
ParamVector first_order_meta_update(const ParamVector& theta, const std::vector<TaskGrad>& tasks,
                                    double alpha, double beta, int inner_steps);

}  // namespace wdc
