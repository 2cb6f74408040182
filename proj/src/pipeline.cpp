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

#include "wdc/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "wdc/error.hpp"
#include "wdc/metrics.hpp"

namespace wdc {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

GenLossVariant parse_loss_variant(const std::string& name) {
    if (name == "minimax") return GenLossVariant::minimax;
    if (name == "non_saturating") return GenLossVariant::non_saturating;
    throw ConfigError("loss_variant: expected \"minimax\" or \"non_saturating\", got \"" + name +
                      "\"");
}

}  // namespace

void PipelineConfig::validate() const {
    if (nt < 1) throw ConfigError("nt: must be >= 1");
    if (num_paths < 1) throw ConfigError("num_paths: must be >= 1");
    if (!(power_gain > 0.0)) throw ConfigError("power_gain: must be > 0");
    if (!(distance_m > 0.0)) throw ConfigError("distance_m: must be > 0");
    if (meta_freqs_ghz.empty()) throw ConfigError("meta_freqs_ghz: must be nonempty");
    for (double f : meta_freqs_ghz)
        if (!(f > 0.0)) throw ConfigError("meta_freqs_ghz: entries must be > 0");
    if (!(target_freq_ghz > 0.0)) throw ConfigError("target_freq_ghz: must be > 0");
    if (meta_samples_per_env < 1) throw ConfigError("meta_samples_per_env: must be >= 1");
    if (target_samples < 1) throw ConfigError("target_samples: must be >= 1");
    if (synth_train_samples < 1) throw ConfigError("synth_train_samples: must be >= 1");
    if (test_samples < 1) throw ConfigError("test_samples: must be >= 1");
    if (noise_dim < 1) throw ConfigError("noise_dim: must be >= 1");
    if (gen_hidden.empty()) throw ConfigError("gen_hidden: must be nonempty");
    if (disc_hidden.empty()) throw ConfigError("disc_hidden: must be nonempty");
    for (int w : gen_hidden)
        if (w < 1) throw ConfigError("gen_hidden: widths must be >= 1");
    for (int w : disc_hidden)
        if (w < 1) throw ConfigError("disc_hidden: widths must be >= 1");
    parse_loss_variant(loss_variant);
    if (!(alpha >= 0.0)) throw ConfigError("alpha: must be >= 0");
    if (!(beta >= 0.0)) throw ConfigError("beta: must be >= 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma: must be >= 0");
    if (inner_steps < 1) throw ConfigError("inner_steps: must be >= 1");
    if (meta_iters < 0) throw ConfigError("meta_iters: must be >= 0");
    if (fine_tune_iters < 0) throw ConfigError("fine_tune_iters: must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size: must be >= 1");
    if (log_interval < 1) throw ConfigError("log_interval: must be >= 1");
    if (eval_samples < 1) throw ConfigError("eval_samples: must be >= 1");
    if (cgan_iters < 0) throw ConfigError("cgan_iters: must be >= 0");
    if (!(cgan_lr > 0.0)) throw ConfigError("cgan_lr: must be > 0");
    if (num_pilots < 1 || num_pilots > nt) throw ConfigError("num_pilots: need 1 <= Np <= nt");
    if (snr_grid_db.empty()) throw ConfigError("snr_grid_db: must be nonempty");
    if (est_epochs < 0) throw ConfigError("est_epochs: must be >= 0");
    if (est_hidden_layers < 1) throw ConfigError("est_hidden_layers: must be >= 1");
    if (est_hidden_width < 1) throw ConfigError("est_hidden_width: must be >= 1");
    if (est_batch_size < 1) throw ConfigError("est_batch_size: must be >= 1");
    if (!(est_lr > 0.0)) throw ConfigError("est_lr: must be > 0");
    if (gain_eval_samples < 1) throw ConfigError("gain_eval_samples: must be >= 1");
    if (num_seeds < 1) throw ConfigError("num_seeds: must be >= 1");
}

PipelineConfig desk_config() { return PipelineConfig{}; }

PipelineConfig paper_config() {
    PipelineConfig cfg;
    cfg.meta_samples_per_env = 20000;
    cfg.synth_train_samples = 200000;
    cfg.gen_hidden = {256, 256, 256};
    cfg.disc_hidden = {256, 256, 256};
    cfg.meta_iters = 130000;
    cfg.fine_tune_iters = 3000;
    cfg.cgan_iters = 20000;
    cfg.est_hidden_width = 256;
    cfg.est_epochs = 30;
    return cfg;
}

PipelineConfig preset_config(const std::string& name) {
    if (name == "desk") return desk_config();
    if (name == "paper") return paper_config();
    throw ConfigError("scale: expected \"desk\" or \"paper\", got \"" + name + "\"");
}

std::string config_to_json_text(const PipelineConfig& cfg) {
    cfg.validate();
    nlohmann::json j;
    j["nt"] = cfg.nt;
    j["num_paths"] = cfg.num_paths;
    j["power_gain"] = cfg.power_gain;
    j["distance_m"] = cfg.distance_m;
    j["meta_freqs_ghz"] = cfg.meta_freqs_ghz;
    j["target_freq_ghz"] = cfg.target_freq_ghz;
    j["meta_samples_per_env"] = cfg.meta_samples_per_env;
    j["target_samples"] = cfg.target_samples;
    j["synth_train_samples"] = cfg.synth_train_samples;
    j["test_samples"] = cfg.test_samples;
    j["noise_dim"] = cfg.noise_dim;
    j["gen_hidden"] = cfg.gen_hidden;
    j["disc_hidden"] = cfg.disc_hidden;
    j["loss_variant"] = cfg.loss_variant;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["gamma"] = cfg.gamma;
    j["inner_steps"] = cfg.inner_steps;
    j["meta_iters"] = cfg.meta_iters;
    j["fine_tune_iters"] = cfg.fine_tune_iters;
    j["batch_size"] = cfg.batch_size;
    j["log_interval"] = cfg.log_interval;
    j["eval_samples"] = cfg.eval_samples;
    j["cgan_iters"] = cfg.cgan_iters;
    j["cgan_lr"] = cfg.cgan_lr;
    j["num_pilots"] = cfg.num_pilots;
    j["snr_grid_db"] = cfg.snr_grid_db;
    j["est_epochs"] = cfg.est_epochs;
    j["est_hidden_layers"] = cfg.est_hidden_layers;
    j["est_hidden_width"] = cfg.est_hidden_width;
    j["est_batch_size"] = cfg.est_batch_size;
    j["est_lr"] = cfg.est_lr;
    j["gain_eval_samples"] = cfg.gain_eval_samples;
    j["seed"] = cfg.seed;
    j["num_seeds"] = cfg.num_seeds;
    return j.dump(2);
}

PipelineConfig config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    PipelineConfig cfg;
    const auto get = [&](const char* key, auto& field) {
        using Field = std::decay_t<decltype(field)>;
        if (!j.contains(key)) return;
        try {
            field = j.at(key).get<Field>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string(key) + ": " + e.what());
        }
        j.erase(key);
    };

    get("nt", cfg.nt);
    get("num_paths", cfg.num_paths);
    get("power_gain", cfg.power_gain);
    get("distance_m", cfg.distance_m);
    get("meta_freqs_ghz", cfg.meta_freqs_ghz);
    get("target_freq_ghz", cfg.target_freq_ghz);
    get("meta_samples_per_env", cfg.meta_samples_per_env);
    get("target_samples", cfg.target_samples);
    get("synth_train_samples", cfg.synth_train_samples);
    get("test_samples", cfg.test_samples);
    get("noise_dim", cfg.noise_dim);
    get("gen_hidden", cfg.gen_hidden);
    get("disc_hidden", cfg.disc_hidden);
    get("loss_variant", cfg.loss_variant);
    get("alpha", cfg.alpha);
    get("beta", cfg.beta);
    get("gamma", cfg.gamma);
    get("inner_steps", cfg.inner_steps);
    get("meta_iters", cfg.meta_iters);
    get("fine_tune_iters", cfg.fine_tune_iters);
    get("batch_size", cfg.batch_size);
    get("log_interval", cfg.log_interval);
    get("eval_samples", cfg.eval_samples);
    get("cgan_iters", cfg.cgan_iters);
    get("cgan_lr", cfg.cgan_lr);
    get("num_pilots", cfg.num_pilots);
    get("snr_grid_db", cfg.snr_grid_db);
    get("est_epochs", cfg.est_epochs);
    get("est_hidden_layers", cfg.est_hidden_layers);
    get("est_hidden_width", cfg.est_hidden_width);
    get("est_batch_size", cfg.est_batch_size);
    get("est_lr", cfg.est_lr);
    get("gain_eval_samples", cfg.gain_eval_samples);
    get("seed", cfg.seed);
    get("num_seeds", cfg.num_seeds);

    if (!j.empty()) {
        std::string unknown;
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (!unknown.empty()) unknown += ", ";
            unknown += key;
        }
        throw ConfigError("unknown config fields: " + unknown);
    }
    cfg.validate();
    return cfg;
}

ChannelConfig channel_config_for(const PipelineConfig& cfg, double freq_ghz, std::uint64_t seed) {
    ChannelConfig ch;
    ch.nt = cfg.nt;
    ch.num_paths = cfg.num_paths;
    ch.power_gain = cfg.power_gain;
    ch.center_freq_ghz = freq_ghz;
    ch.distance_m = cfg.distance_m;
    ch.seed = seed;
    return ch;
}

GanSpec pipeline_gan_spec(const PipelineConfig& cfg) {
    return make_gan_spec(cfg.noise_dim, cfg.num_envs(), 2 * cfg.nt, cfg.gen_hidden,
                         cfg.disc_hidden, parse_loss_variant(cfg.loss_variant));
}

MetaConfig pipeline_meta_config(const PipelineConfig& cfg, std::uint64_t seed) {
    MetaConfig m;
    m.alpha = cfg.alpha;
    m.beta = cfg.beta;
    m.gamma = cfg.gamma;
    m.inner_steps = cfg.inner_steps;
    m.meta_iters = cfg.meta_iters;
    m.fine_tune_iters = cfg.fine_tune_iters;
    m.batch_size = cfg.batch_size;
    m.log_interval = cfg.log_interval;
    m.eval_samples = cfg.eval_samples;
    m.seed = seed;
    return m;
}

PilotConfig pipeline_pilot_config(const PipelineConfig& cfg, std::uint64_t seed) {
    return make_pilot_config(cfg.nt, cfg.num_pilots, cfg.snr_grid_db, seed);
}

EstimatorHyper pipeline_estimator_hyper(const PipelineConfig& cfg) {
    EstimatorHyper h;
    h.hidden_layers = cfg.est_hidden_layers;
    h.hidden_width = cfg.est_hidden_width;
    h.batch_size = cfg.est_batch_size;
    h.learning_rate = cfg.est_lr;
    return h;
}

EnvironmentSet generate_environments(const PipelineConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    EnvironmentSet env;

    const int m = static_cast<int>(cfg.meta_freqs_ghz.size());
    env.meta.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const ChannelConfig ch = channel_config_for(cfg, cfg.meta_freqs_ghz[static_cast<std::size_t>(i)],
                                                    derive_seed(seed, seedstream::kMetaEnvBase + static_cast<std::uint64_t>(i)));
        env.meta.push_back(generate_dataset(ch, cfg.meta_samples_per_env, i));
    }

    const int target_cond = cfg.target_condition();
    env.target_train = generate_dataset(
        channel_config_for(cfg, cfg.target_freq_ghz, derive_seed(seed, seedstream::kTargetTrain)),
        cfg.target_samples, target_cond);
    env.genie_train = generate_dataset(
        channel_config_for(cfg, cfg.target_freq_ghz, derive_seed(seed, seedstream::kGenieTrain)),
        cfg.synth_train_samples, target_cond);
    env.test = generate_dataset(
        channel_config_for(cfg, cfg.target_freq_ghz, derive_seed(seed, seedstream::kTest)),
        cfg.test_samples, target_cond);

    // One shared normalization across every condition: the square root of
    // the mean meta-environment gain. Per-condition power differences
    // survive normalization and must be learned by the generator.
    double gain_sum = 0.0;
    for (const auto& ds : env.meta) gain_sum += path_gain(ds);
    env.scale = std::sqrt(gain_sum / static_cast<double>(env.meta.size()));

    for (auto& ds : env.meta) ds = rescaled(ds, env.scale);
    env.target_train = rescaled(env.target_train, env.scale);
    env.genie_train = rescaled(env.genie_train, env.scale);
    env.test = rescaled(env.test, env.scale);
    return env;
}

GanPair train_plain_cgan(const GanSpec& spec, const WirelessDataset& dataset,
                         const Condition& cond, int iters, double lr, int batch_size,
                         std::uint64_t seed) {
    if (dataset.samples.empty()) throw InvalidArgument("train_plain_cgan: dataset is empty");
    if (iters < 0) throw InvalidArgument("train_plain_cgan: iters must be >= 0");
    // Adversarial training profile: beta1 = 0.5 damps the momentum coupling
    // that makes the two-player updates spiral.
    GanPair pair = init_gan(spec, derive_seed(seed, 0), OptimizerState::make_adam(lr, 0.5),
                            OptimizerState::make_adam(lr, 0.5));
    Rng rng(derive_seed(seed, 1));
    const int m = std::min<int>(batch_size, static_cast<int>(dataset.samples.size()));
    for (int t = 0; t < iters; ++t) {
        const EncodedBatch real = sample_batch(dataset, m, rng);
        pair = gan_step(pair, real, cond, rng).pair;
    }
    return pair;
}

TrainedGans train_pipeline_gans(const PipelineConfig& cfg, const EnvironmentSet& env,
                                std::uint64_t seed) {
    const GanSpec spec = pipeline_gan_spec(cfg);
    const int m = static_cast<int>(env.meta.size());
    std::vector<Condition> conds;
    conds.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) conds.push_back(make_condition(i, cfg.num_envs()));
    const Condition target_cond = make_condition(cfg.target_condition(), cfg.num_envs());

    TrainedGans gans;
    const MetaConfig mcfg = pipeline_meta_config(cfg, derive_seed(seed, seedstream::kMetaTrain));
    auto [meta_pair, meta_trace] = meta_train(spec, env.meta, conds, mcfg);
    gans.meta_only = std::move(meta_pair);
    gans.meta_trace = std::move(meta_trace);

    Rng ft_rng(derive_seed(seed, seedstream::kFineTune));
    auto [tuned, ft_trace] = fine_tune(gans.meta_only, env.target_train, target_cond, mcfg, ft_rng);
    gans.fine_tuned = std::move(tuned);
    gans.fine_tune_trace = std::move(ft_trace);

    gans.plain_cgan = train_plain_cgan(spec, env.target_train, target_cond, cfg.cgan_iters,
                                       cfg.cgan_lr, cfg.batch_size, derive_seed(seed, seedstream::kPlainCgan));
    return gans;
}

Fig3aRun run_fig3a(const PipelineConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const EnvironmentSet env = generate_environments(cfg, seed);
    Fig3aRun run;
    run.scale = env.scale;
    run.gans = train_pipeline_gans(cfg, env, seed);

    const int m = static_cast<int>(env.meta.size());
    const Condition target_cond = make_condition(cfg.target_condition(), cfg.num_envs());

    // Per-condition gains of the meta-trained generator (before any
    // target data is seen), against the genie sets' empirical gains.
    Rng gain_rng(derive_seed(seed, seedstream::kGainMeta));
    for (int i = 0; i < m; ++i) {
        run.genie_gains_meta.push_back(path_gain(env.meta[static_cast<std::size_t>(i)]));
        const WirelessDataset synth =
            synthesize(run.gans.meta_only, make_condition(i, cfg.num_envs()),
                       cfg.gain_eval_samples, env.scale, gain_rng);
        run.synth_gains_meta.push_back(path_gain(synth));
    }

    run.genie_gain_target = path_gain(env.test);
    {
        Rng rng(derive_seed(seed, seedstream::kGainTargetMetaOnly));
        run.synth_gain_target_meta_only = path_gain(
            synthesize(run.gans.meta_only, target_cond, cfg.gain_eval_samples, env.scale, rng));
    }
    {
        Rng rng(derive_seed(seed, seedstream::kGainTargetTuned));
        run.synth_gain_target_fine_tuned = path_gain(
            synthesize(run.gans.fine_tuned, target_cond, cfg.gain_eval_samples, env.scale, rng));
    }

    // Training sets: one genie, one from the fine-tuned generator, one
    // from the plain CGAN.
    Rng synth_meta_rng(derive_seed(seed, seedstream::kSynthMeta));
    const WirelessDataset meta_train_set = synthesize(
        run.gans.fine_tuned, target_cond, cfg.synth_train_samples, env.scale, synth_meta_rng);
    Rng synth_cgan_rng(derive_seed(seed, seedstream::kSynthCgan));
    const WirelessDataset cgan_train_set = synthesize(
        run.gans.plain_cgan, target_cond, cfg.synth_train_samples, env.scale, synth_cgan_rng);

    const PilotConfig pcfg = pipeline_pilot_config(cfg, seed);
    const EstimatorHyper hyper = pipeline_estimator_hyper(cfg);

    const auto train_and_eval = [&](const std::string& label, const WirelessDataset& train_set,
                                    std::uint64_t est_seed) {
        Rng train_rng(est_seed);
        const EstimatorNet net = train_estimator(train_set, pcfg, cfg.est_epochs, train_rng, hyper);
        // All methods evaluate under one noise stream so their curves
        // differ only through the trained nets.
        Rng eval_rng(derive_seed(seed, seedstream::kEval));
        run.curves.push_back({label, eval_mse(net, env.test, pcfg, eval_rng)});
    };

    train_and_eval("genie", env.genie_train, derive_seed(seed, seedstream::kEstGenie));
    train_and_eval("meta_gan", meta_train_set, derive_seed(seed, seedstream::kEstMeta));
    train_and_eval("cgan", cgan_train_set, derive_seed(seed, seedstream::kEstCgan));
    return run;
}

std::string mse_curves_csv(const std::vector<std::pair<std::uint64_t, Fig3aRun>>& runs) {
    std::string out = "snr_db,nmse,dataset_label,seed\n";
    for (const auto& [seed, run] : runs) {
        for (const auto& curve : run.curves) {
            for (const auto& point : curve.eval.points) {
                out += fmt17(point.snr_db);
                out += ',';
                out += fmt17(point.nmse);
                out += ',';
                out += curve.label;
                out += ',';
                out += std::to_string(seed);
                out += '\n';
            }
        }
    }
    return out;
}

std::string meta_trace_csv(const MetaTrace& trace) {
    std::string out;
    if (trace.records.empty()) return out;
    const std::size_t m = trace.records.front().inner_losses.size();
    out = "iteration,meta_loss,validation_loss";
    for (std::size_t i = 0; i < m; ++i) out += ",inner_loss_" + std::to_string(i);
    for (std::size_t i = 0; i < trace.records.front().path_gains.size(); ++i)
        out += ",path_gain_" + std::to_string(i);
    out += '\n';
    for (const auto& rec : trace.records) {
        out += std::to_string(rec.iteration);
        out += ',';
        out += fmt17(rec.meta_loss);
        out += ',';
        out += fmt17(rec.validation_loss);
        for (double v : rec.inner_losses) {
            out += ',';
            out += fmt17(v);
        }
        for (double v : rec.path_gains) {
            out += ',';
            out += fmt17(v);
        }
        out += '\n';
    }
    return out;
}

std::string fine_tune_trace_csv(const std::vector<FineTuneRecord>& records) {
    std::string out = "iteration,disc_loss,gen_loss\n";
    for (const auto& rec : records) {
        out += std::to_string(rec.iteration);
        out += ',';
        out += fmt17(rec.disc_loss_value);
        out += ',';
        out += fmt17(rec.gen_loss_value);
        out += '\n';
    }
    return out;
}

}  // namespace wdc
