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

#include "wdc/channel.hpp"
#include "wdc/estimator.hpp"
#include "wdc/gan.hpp"
#include "wdc/meta.hpp"

namespace wdc {

/// Fully resolved experiment configuration. Every knob of the end-to-end
/// pipeline lives here; the committed config files list each field with
/// its default. `out_dir` is where a run writes, and is the one field
/// excluded from manifests, so the same experiment relocated on disk
/// keeps the same config digest.
struct PipelineConfig {
    // Channel model.
    int nt = 8;
    int num_paths = 3;
    double power_gain = 784.0;  // P0; with R = 1 m the 28 GHz gain is 1.0
    double distance_m = 1.0;
    std::vector<double> meta_freqs_ghz = {28.0, 37.0, 41.0, 60.0};
    double target_freq_ghz = 39.0;

    // Dataset sizes.
    int meta_samples_per_env = 2000;
    int target_samples = 800;
    int synth_train_samples = 20000;
    int test_samples = 10000;

    // GAN architecture.
    int noise_dim = 8;
    std::vector<int> gen_hidden = {64, 64, 64};
    std::vector<int> disc_hidden = {64, 64, 64};
    std::string loss_variant = "non_saturating";  // or "minimax"

    // Meta training (inner step alpha, meta step beta, fine-tune gamma).
    double alpha = 0.02;
    double beta = 0.005;
    double gamma = 0.02;
    int inner_steps = 1;
    int meta_iters = 10000;
    int fine_tune_iters = 1500;
    int batch_size = 64;
    int log_interval = 100;
    int eval_samples = 256;

    // Plain-CGAN baseline (trained from scratch on the target samples).
    int cgan_iters = 4000;
    double cgan_lr = 2e-4;  // adam(0.5, 0.999)

    // Estimator.
    int num_pilots = 4;
    std::vector<double> snr_grid_db = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    int est_epochs = 20;
    int est_hidden_layers = 5;
    int est_hidden_width = 96;
    int est_batch_size = 64;
    double est_lr = 1e-3;

    // Gain measurement (samples synthesized per condition when a stage
    // reports path gains).
    int gain_eval_samples = 2000;

    // Run control.
    std::uint64_t seed = 1;
    int num_seeds = 3;
    std::string out_dir = "out";

    void validate() const;

    int num_envs() const { return static_cast<int>(meta_freqs_ghz.size()) + 1; }
    int target_condition() const { return static_cast<int>(meta_freqs_ghz.size()); }
};

/// Desk preset: the defaults above, sized for a laptop-scale run.
PipelineConfig desk_config();

/// Paper-scale preset: full sample counts and 3x256 / 5x256 networks.
/// Provided for completeness; runtimes are far beyond the desk budget.
PipelineConfig paper_config();

/// Resolve a preset by name ("desk" or "paper").
PipelineConfig preset_config(const std::string& name);

/// JSON round-trip for manifests. Serialization is key-sorted and
/// locale-independent; out_dir is omitted. Unknown fields on read throw
/// ConfigError naming the field.
std::string config_to_json_text(const PipelineConfig& cfg);
PipelineConfig config_from_json_text(const std::string& text);

/// Stage seed streams. Every stage derives its randomness as
/// derive_seed(experiment_seed, stream), so no stage's draw count can
/// shift another stage's results, and a staged CLI run agrees draw for
/// draw with the monolithic pipeline.
namespace seedstream {
inline constexpr std::uint64_t kMetaEnvBase = 100;  // + environment index
inline constexpr std::uint64_t kTargetTrain = 200;
inline constexpr std::uint64_t kGenieTrain = 201;
inline constexpr std::uint64_t kTest = 202;
inline constexpr std::uint64_t kMetaTrain = 300;
inline constexpr std::uint64_t kFineTune = 301;
inline constexpr std::uint64_t kPlainCgan = 302;
inline constexpr std::uint64_t kGainMeta = 400;
inline constexpr std::uint64_t kGainTargetMetaOnly = 401;
inline constexpr std::uint64_t kGainTargetTuned = 402;
inline constexpr std::uint64_t kSynthMeta = 403;
inline constexpr std::uint64_t kSynthCgan = 404;
inline constexpr std::uint64_t kEstGenie = 500;
inline constexpr std::uint64_t kEstMeta = 501;
inline constexpr std::uint64_t kEstCgan = 502;
inline constexpr std::uint64_t kEstStandalone = 510;  // CLI train-estimator stage
inline constexpr std::uint64_t kEval = 600;  // shared by all evaluations on purpose
inline constexpr std::uint64_t kSynthStandalone = 610;  // CLI synthesize stage
inline constexpr std::uint64_t kSmote = 620;
inline constexpr std::uint64_t kDiagnostics = 700;
}  // namespace seedstream

ChannelConfig channel_config_for(const PipelineConfig& cfg, double freq_ghz, std::uint64_t seed);
GanSpec pipeline_gan_spec(const PipelineConfig& cfg);
MetaConfig pipeline_meta_config(const PipelineConfig& cfg, std::uint64_t seed);
PilotConfig pipeline_pilot_config(const PipelineConfig& cfg, std::uint64_t seed);
EstimatorHyper pipeline_estimator_hyper(const PipelineConfig& cfg);

/// Genie data for one experiment: per-environment meta sets (conditions
/// 0..M-1), the target fine-tune set and the held-out test pool
/// (condition M), plus the genie estimator-training set. All are stored
/// under one shared scale, the square root of the mean meta-environment
/// path gain, so each condition keeps its own relative power and the GAN
/// has to learn the differences.
struct EnvironmentSet {
    std::vector<WirelessDataset> meta;
    WirelessDataset target_train;
    WirelessDataset genie_train;  // target-environment genie training pool
    WirelessDataset test;
    double scale = 1.0;
};

EnvironmentSet generate_environments(const PipelineConfig& cfg, std::uint64_t seed);

/// The three generators the experiment compares.
struct TrainedGans {
    GanPair meta_only;    // after meta training, before fine-tuning
    GanPair fine_tuned;   // after target fine-tuning
    GanPair plain_cgan;   // trained from scratch on the target samples
    MetaTrace meta_trace;
    std::vector<FineTuneRecord> fine_tune_trace;
};

TrainedGans train_pipeline_gans(const PipelineConfig& cfg, const EnvironmentSet& env,
                                std::uint64_t seed);

/// Standard conditional-GAN training with adam, the no-meta baseline.
GanPair train_plain_cgan(const GanSpec& spec, const WirelessDataset& dataset,
                         const Condition& cond, int iters, double lr, int batch_size,
                         std::uint64_t seed);

struct MethodCurve {
    std::string label;  // "genie", "meta_gan", "cgan"
    EvalResult eval;
};

/// Everything one seed of the end-to-end experiment produces.
struct Fig3aRun {
    double scale = 1.0;
    std::vector<double> genie_gains_meta;   // empirical, one per meta environment
    std::vector<double> synth_gains_meta;   // meta-only generator, same conditions
    double genie_gain_target = 0.0;         // from the genie test pool
    double synth_gain_target_meta_only = 0.0;
    double synth_gain_target_fine_tuned = 0.0;
    std::vector<MethodCurve> curves;
    TrainedGans gans;
};

/// One full experiment at one seed: generate environments, train the
/// three generators, synthesize training sets, train one estimator per
/// training set, and evaluate all three on the same genie test pool with
/// identical noise draws.
Fig3aRun run_fig3a(const PipelineConfig& cfg, std::uint64_t seed);

/// CSV of all runs' curves, columns: snr_db, nmse, dataset_label, seed.
std::string mse_curves_csv(const std::vector<std::pair<std::uint64_t, Fig3aRun>>& runs);

/// CSV of a meta trace: iteration, per-dataset losses, meta loss,
/// validation loss, per-condition path gain.
std::string meta_trace_csv(const MetaTrace& trace);

/// CSV of a fine-tune trace: iteration, disc loss, gen loss.
std::string fine_tune_trace_csv(const std::vector<FineTuneRecord>& records);

}  // namespace wdc
