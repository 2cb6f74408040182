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
//
// Command-line front end. Each subcommand runs one pipeline stage into
// --out-dir and writes a manifest-<stage>.json recording the fully
// resolved configuration, the stage flags, input file digests, and
// output file digests. `wdc --from-manifest <file> --out-dir <dir>`
// replays the recorded stage; with identical inputs the outputs are
// byte-identical.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wdc/baselines.hpp"
#include "wdc/dataio.hpp"
#include "wdc/error.hpp"
#include "wdc/metrics.hpp"
#include "wdc/pipeline.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Flags that are not part of PipelineConfig: file inputs and small
// per-stage knobs. One struct covers every stage; manifests record all
// fields so replay needs no per-stage schema.
struct StageFlags {
    std::string data_dir;
    std::string gan_path;
    std::string input_path;
    std::string train_path;
    std::string net_path;
    std::string test_path;
    std::string scale_from;
    std::string label = "custom";
    std::string which = "tuned";  // synthesize: meta | tuned | cgan checkpoint layout
    int condition = -1;           // synthesize: -1 selects the target condition
    int count = -1;               // synthesize/smote: -1 selects the config default
    double sample_scale = 1.0;
    int smote_k = 5;
    std::uint64_t flops_n = 200000;
    int flops_dim = 16;
    int flops_k = 5;
};

nlohmann::json flags_to_json(const StageFlags& f) {
    nlohmann::json j;
    j["condition"] = f.condition;
    j["count"] = f.count;
    j["data_dir"] = f.data_dir;
    j["flops_dim"] = f.flops_dim;
    j["flops_k"] = f.flops_k;
    j["flops_n"] = f.flops_n;
    j["gan_path"] = f.gan_path;
    j["input_path"] = f.input_path;
    j["label"] = f.label;
    j["net_path"] = f.net_path;
    j["sample_scale"] = f.sample_scale;
    j["scale_from"] = f.scale_from;
    j["smote_k"] = f.smote_k;
    j["test_path"] = f.test_path;
    j["train_path"] = f.train_path;
    j["which"] = f.which;
    return j;
}

StageFlags flags_from_json(const nlohmann::json& j) {
    StageFlags f;
    const auto get = [&](const char* key, auto& field) {
        using Field = std::decay_t<decltype(field)>;
        if (j.contains(key)) field = j.at(key).get<Field>();
    };
    get("condition", f.condition);
    get("count", f.count);
    get("data_dir", f.data_dir);
    get("flops_dim", f.flops_dim);
    get("flops_k", f.flops_k);
    get("flops_n", f.flops_n);
    get("gan_path", f.gan_path);
    get("input_path", f.input_path);
    get("label", f.label);
    get("net_path", f.net_path);
    get("sample_scale", f.sample_scale);
    get("scale_from", f.scale_from);
    get("smote_k", f.smote_k);
    get("test_path", f.test_path);
    get("train_path", f.train_path);
    get("which", f.which);
    return f;
}

// Collects what a running stage consumed and produced, then renders the
// manifest.
class StageRun {
  public:
    StageRun(std::string stage, const wdc::PipelineConfig& cfg, const StageFlags& flags)
        : stage_(std::move(stage)), cfg_(cfg), flags_(flags) {}

    std::string out_path(const std::string& name) const { return cfg_.out_dir + "/" + name; }

    void note_input(const std::string& path) {
        inputs_[path] = wdc::digest_hex(wdc::file_digest(path));
    }

    void write_output(const std::string& name, const std::string& bytes) {
        wdc::write_file_atomic(out_path(name), bytes);
        outputs_.push_back(name);
    }

    void note_output(const std::string& name) { outputs_.push_back(name); }

    void finish() {
        nlohmann::json j;
        j["stage"] = stage_;
        j["version"] = kVersion;
        j["formats"] = {{"dataset", "WDC1 v1"}, {"checkpoint", "WCK1 v1"}};
        j["config"] = nlohmann::json::parse(wdc::config_to_json_text(cfg_));
        j["flags"] = flags_to_json(flags_);
        nlohmann::json inputs = nlohmann::json::object();
        for (const auto& [path, digest] : inputs_) inputs[path] = digest;
        j["inputs"] = inputs;
        nlohmann::json outputs = nlohmann::json::object();
        for (const auto& name : outputs_)
            outputs[name] = wdc::digest_hex(wdc::file_digest(out_path(name)));
        j["outputs"] = outputs;
        wdc::write_file_atomic(out_path("manifest-" + stage_ + ".json"), j.dump(2) + "\n");
    }

  private:
    std::string stage_;
    const wdc::PipelineConfig& cfg_;
    const StageFlags& flags_;
    std::map<std::string, std::string> inputs_;
    std::vector<std::string> outputs_;
};

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- stages

void run_gen_channels(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("gen-channels", cfg, flags);
    const wdc::EnvironmentSet env = wdc::generate_environments(cfg, cfg.seed);
    for (std::size_t i = 0; i < env.meta.size(); ++i) {
        const std::string name = "meta_" + std::to_string(i) + ".wdc1";
        wdc::save_dataset(env.meta[i], run.out_path(name));
        run.note_output(name);
    }
    wdc::save_dataset(env.target_train, run.out_path("target_train.wdc1"));
    run.note_output("target_train.wdc1");
    wdc::save_dataset(env.genie_train, run.out_path("genie_train.wdc1"));
    run.note_output("genie_train.wdc1");
    wdc::save_dataset(env.test, run.out_path("test.wdc1"));
    run.note_output("test.wdc1");
    run.finish();
}

std::vector<wdc::WirelessDataset> load_meta_sets(const wdc::PipelineConfig& cfg,
                                                 const std::string& data_dir, StageRun& run) {
    std::vector<wdc::WirelessDataset> meta;
    const int m = static_cast<int>(cfg.meta_freqs_ghz.size());
    for (int i = 0; i < m; ++i) {
        const std::string path = data_dir + "/meta_" + std::to_string(i) + ".wdc1";
        run.note_input(path);
        meta.push_back(wdc::load_dataset(path));
        if (meta.back().condition_index != i)
            throw wdc::CompatibilityError(path + ": expected condition index " +
                                          std::to_string(i) + ", found " +
                                          std::to_string(meta.back().condition_index));
    }
    return meta;
}

std::vector<wdc::Condition> meta_conditions(const wdc::PipelineConfig& cfg) {
    std::vector<wdc::Condition> conds;
    for (std::size_t i = 0; i < cfg.meta_freqs_ghz.size(); ++i)
        conds.push_back(wdc::make_condition(static_cast<int>(i), cfg.num_envs()));
    return conds;
}

void run_meta_train(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("meta-train", cfg, flags);
    const std::string data_dir = flags.data_dir.empty() ? cfg.out_dir : flags.data_dir;
    const auto meta = load_meta_sets(cfg, data_dir, run);
    const wdc::GanSpec spec = wdc::pipeline_gan_spec(cfg);
    const wdc::MetaConfig mcfg =
        wdc::pipeline_meta_config(cfg, wdc::derive_seed(cfg.seed, wdc::seedstream::kMetaTrain));
    auto [pair, trace] = wdc::meta_train(spec, meta, meta_conditions(cfg), mcfg);
    wdc::save_gan(pair, run.out_path("gan_meta.wck1"));
    run.note_output("gan_meta.wck1");
    run.write_output("meta_trace.csv", wdc::meta_trace_csv(trace));
    run.finish();
}

void run_fine_tune(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("fine-tune", cfg, flags);
    const std::string data_dir = flags.data_dir.empty() ? cfg.out_dir : flags.data_dir;
    const std::string gan_path =
        flags.gan_path.empty() ? data_dir + "/gan_meta.wck1" : flags.gan_path;
    const std::string target_path = data_dir + "/target_train.wdc1";
    run.note_input(gan_path);
    run.note_input(target_path);

    const wdc::GanSpec spec = wdc::pipeline_gan_spec(cfg);
    const wdc::MetaConfig mcfg =
        wdc::pipeline_meta_config(cfg, wdc::derive_seed(cfg.seed, wdc::seedstream::kMetaTrain));
    const wdc::GanPair pair =
        wdc::load_gan(gan_path, spec, wdc::OptimizerState::make_sgd(mcfg.gamma),
                      wdc::OptimizerState::make_sgd(mcfg.gamma));
    const wdc::WirelessDataset target = wdc::load_dataset(target_path);
    const wdc::Condition cond = wdc::make_condition(cfg.target_condition(), cfg.num_envs());

    wdc::Rng rng(wdc::derive_seed(cfg.seed, wdc::seedstream::kFineTune));
    auto [tuned, trace] = wdc::fine_tune(pair, target, cond, mcfg, rng);
    wdc::save_gan(tuned, run.out_path("gan_tuned.wck1"));
    run.note_output("gan_tuned.wck1");
    run.write_output("fine_tune_trace.csv", wdc::fine_tune_trace_csv(trace));
    run.finish();
}

void run_train_cgan(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("train-cgan", cfg, flags);
    const std::string data_dir = flags.data_dir.empty() ? cfg.out_dir : flags.data_dir;
    const std::string target_path = data_dir + "/target_train.wdc1";
    run.note_input(target_path);
    const wdc::WirelessDataset target = wdc::load_dataset(target_path);
    const wdc::GanPair pair = wdc::train_plain_cgan(
        wdc::pipeline_gan_spec(cfg), target, wdc::make_condition(cfg.target_condition(), cfg.num_envs()),
        cfg.cgan_iters, cfg.cgan_lr, cfg.batch_size,
        wdc::derive_seed(cfg.seed, wdc::seedstream::kPlainCgan));
    wdc::save_gan(pair, run.out_path("gan_cgan.wck1"));
    run.note_output("gan_cgan.wck1");
    run.finish();
}

void run_synthesize(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("synthesize", cfg, flags);
    if (flags.gan_path.empty()) throw wdc::ConfigError("synthesize: --gan is required");
    run.note_input(flags.gan_path);
    const wdc::GanSpec spec = wdc::pipeline_gan_spec(cfg);
    const wdc::GanPair pair = wdc::load_gan(flags.gan_path, spec, wdc::OptimizerState::make_sgd(1.0),
                                            wdc::OptimizerState::make_sgd(1.0));
    const int condition = flags.condition < 0 ? cfg.target_condition() : flags.condition;
    const int count = flags.count < 0 ? cfg.synth_train_samples : flags.count;
    double scale = flags.sample_scale;
    if (!flags.scale_from.empty()) {
        run.note_input(flags.scale_from);
        scale = wdc::load_dataset(flags.scale_from).scale;
    }
    wdc::Rng rng(wdc::derive_seed(cfg.seed, wdc::seedstream::kSynthStandalone));
    const wdc::WirelessDataset synth =
        wdc::synthesize(pair, wdc::make_condition(condition, cfg.num_envs()), count, scale, rng);
    wdc::save_dataset(synth, run.out_path("synth.wdc1"));
    run.note_output("synth.wdc1");
    run.finish();
}

void run_train_estimator(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("train-estimator", cfg, flags);
    if (flags.train_path.empty()) throw wdc::ConfigError("train-estimator: --train is required");
    run.note_input(flags.train_path);
    const wdc::WirelessDataset train_set = wdc::load_dataset(flags.train_path);
    const wdc::PilotConfig pcfg = wdc::pipeline_pilot_config(cfg, cfg.seed);
    wdc::Rng rng(wdc::derive_seed(cfg.seed, wdc::seedstream::kEstStandalone));
    const wdc::EstimatorNet net = wdc::train_estimator(train_set, pcfg, cfg.est_epochs, rng,
                                                       wdc::pipeline_estimator_hyper(cfg));
    const std::string name = "est_" + flags.label + ".wck1";
    wdc::save_estimator(net, run.out_path(name));
    run.note_output(name);
    run.finish();
}

void run_evaluate(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("evaluate", cfg, flags);
    if (flags.net_path.empty()) throw wdc::ConfigError("evaluate: --net is required");
    if (flags.test_path.empty()) throw wdc::ConfigError("evaluate: --test is required");
    run.note_input(flags.net_path);
    run.note_input(flags.test_path);
    const wdc::PilotConfig pcfg = wdc::pipeline_pilot_config(cfg, cfg.seed);
    const wdc::EstimatorNet net =
        wdc::load_estimator(flags.net_path, pcfg, wdc::pipeline_estimator_hyper(cfg));
    const wdc::WirelessDataset test_set = wdc::load_dataset(flags.test_path);
    wdc::Rng rng(wdc::derive_seed(cfg.seed, wdc::seedstream::kEval));
    const wdc::EvalResult eval = wdc::eval_mse(net, test_set, pcfg, rng);

    std::string csv = "snr_db,nmse,dataset_label,seed\n";
    char buf[64];
    for (const auto& point : eval.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", point.snr_db, point.nmse);
        csv += buf;
        csv += flags.label + "," + std::to_string(cfg.seed) + "\n";
    }
    run.write_output("mse_" + flags.label + ".csv", csv);

    nlohmann::json j;
    j["excluded_zero_norm"] = eval.excluded;
    j["label"] = flags.label;
    run.write_output("evaluate_" + flags.label + ".json", json_text(j));
    run.finish();
}

void run_smote(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("smote", cfg, flags);
    if (flags.input_path.empty()) throw wdc::ConfigError("smote: --input is required");
    run.note_input(flags.input_path);
    const wdc::WirelessDataset input = wdc::load_dataset(flags.input_path);
    const int count = flags.count < 0 ? cfg.synth_train_samples : flags.count;
    wdc::Rng rng(wdc::derive_seed(cfg.seed, wdc::seedstream::kSmote));
    const wdc::WirelessDataset synth = wdc::smote_generate(input, flags.smote_k, count, rng);
    wdc::save_dataset(synth, run.out_path("smote.wdc1"));
    run.note_output("smote.wdc1");
    run.finish();
}

nlohmann::json flops_report_json(const wdc::FlopsReport& report) {
    nlohmann::json j;
    j["method"] = report.method;
    j["flops_per_sample"] = report.flops_per_sample;
    j["convention"] = report.convention;
    nlohmann::json assumptions = nlohmann::json::object();
    for (const auto& [key, value] : report.assumptions) assumptions[key] = value;
    j["assumptions"] = assumptions;
    return j;
}

void run_flops_report(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("flops-report", cfg, flags);
    const wdc::GanSpec spec = wdc::pipeline_gan_spec(cfg);
    nlohmann::json j;
    j["generator"] = flops_report_json(wdc::flops_generator(spec.gen_spec));
    j["smote"] = flops_report_json(wdc::flops_smote(flags.flops_n, flags.flops_dim, flags.flops_k));
    run.write_output("flops_report.json", json_text(j));
    run.finish();
}

void run_diagnostics(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("diagnostics", cfg, flags);
    const std::string data_dir = flags.data_dir.empty() ? cfg.out_dir : flags.data_dir;
    auto meta = load_meta_sets(cfg, data_dir, run);
    const std::string target_path = data_dir + "/target_train.wdc1";
    run.note_input(target_path);
    const wdc::WirelessDataset target = wdc::load_dataset(target_path);
    const std::string gan_path =
        flags.gan_path.empty() ? data_dir + "/gan_meta.wck1" : flags.gan_path;
    run.note_input(gan_path);
    const wdc::GanPair pair =
        wdc::load_gan(gan_path, wdc::pipeline_gan_spec(cfg), wdc::OptimizerState::make_sgd(1.0),
                      wdc::OptimizerState::make_sgd(1.0));

    const auto conds = meta_conditions(cfg);
    const wdc::Condition target_cond = wdc::make_condition(cfg.target_condition(), cfg.num_envs());
    wdc::Rng rng(wdc::derive_seed(cfg.seed, wdc::seedstream::kDiagnostics));

    nlohmann::json j;
    nlohmann::json gains = nlohmann::json::array();
    for (std::size_t i = 0; i < meta.size(); ++i) {
        const wdc::WirelessDataset synth =
            wdc::synthesize(pair, conds[i], cfg.gain_eval_samples, meta[i].scale, rng);
        nlohmann::json row;
        row["condition"] = static_cast<int>(i);
        row["freq_ghz"] = cfg.meta_freqs_ghz[i];
        row["genie_path_gain"] = wdc::path_gain(meta[i]);
        row["synth_path_gain"] = wdc::path_gain(synth);
        gains.push_back(row);
    }
    {
        const wdc::WirelessDataset synth =
            wdc::synthesize(pair, target_cond, cfg.gain_eval_samples, target.scale, rng);
        nlohmann::json row;
        row["condition"] = cfg.target_condition();
        row["freq_ghz"] = cfg.target_freq_ghz;
        row["genie_path_gain"] = wdc::path_gain(target);
        row["synth_path_gain"] = wdc::path_gain(synth);
        gains.push_back(row);
    }
    j["path_gains"] = gains;

    const wdc::LossGapReport gap =
        wdc::loss_gap_report(pair, meta, target, conds, target_cond, cfg.batch_size, rng);
    j["loss_gap"] = {{"gap", gap.gap},
                     {"target_loss", gap.target_loss},
                     {"mean_meta_loss", gap.mean_meta_loss},
                     {"tv_proxy", gap.tv_proxy}};

    // TV between each meta environment and the target on per-sample gain.
    double max_gain = wdc::path_gain(target);
    for (const auto& ds : meta) max_gain = std::max(max_gain, wdc::path_gain(ds));
    nlohmann::json tv = nlohmann::json::array();
    for (std::size_t i = 0; i < meta.size(); ++i) {
        nlohmann::json row;
        row["condition"] = static_cast<int>(i);
        row["tv_to_target"] =
            wdc::tv_distance(meta[i], target, wdc::TvFeature::path_gain_per_sample,
                             wdc::kDefaultTvBins, 0.0, 4.0 * max_gain);
        tv.push_back(row);
    }
    j["tv_distances"] = tv;
    run.write_output("diagnostics.json", json_text(j));
    run.finish();
}

void run_repro_fig3a(const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    StageRun run("repro-fig3a", cfg, flags);
    std::vector<std::pair<std::uint64_t, wdc::Fig3aRun>> runs;
    nlohmann::json gains = nlohmann::json::array();
    for (int k = 0; k < cfg.num_seeds; ++k) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(k);
        std::cerr << "[wdc] repro-fig3a: seed " << seed << " (" << (k + 1) << "/" << cfg.num_seeds
                  << ")\n";
        runs.emplace_back(seed, wdc::run_fig3a(cfg, seed));
        const wdc::Fig3aRun& r = runs.back().second;

        nlohmann::json row;
        row["seed"] = seed;
        row["scale"] = r.scale;
        row["genie_gains_meta"] = r.genie_gains_meta;
        row["synth_gains_meta"] = r.synth_gains_meta;
        row["genie_gain_target"] = r.genie_gain_target;
        row["synth_gain_target_meta_only"] = r.synth_gain_target_meta_only;
        row["synth_gain_target_fine_tuned"] = r.synth_gain_target_fine_tuned;
        gains.push_back(row);

        const std::string tag = "_seed" + std::to_string(seed);
        run.write_output("meta_trace" + tag + ".csv", wdc::meta_trace_csv(r.gans.meta_trace));
        run.write_output("fine_tune_trace" + tag + ".csv",
                         wdc::fine_tune_trace_csv(r.gans.fine_tune_trace));
        if (k == 0) {
            wdc::save_gan(r.gans.meta_only, run.out_path("gan_meta.wck1"));
            run.note_output("gan_meta.wck1");
            wdc::save_gan(r.gans.fine_tuned, run.out_path("gan_tuned.wck1"));
            run.note_output("gan_tuned.wck1");
            wdc::save_gan(r.gans.plain_cgan, run.out_path("gan_cgan.wck1"));
            run.note_output("gan_cgan.wck1");
        }
    }
    run.write_output("mse_curves.csv", wdc::mse_curves_csv(runs));
    run.write_output("path_gains.json", json_text(gains));
    run.finish();
}

void dispatch(const std::string& stage, const wdc::PipelineConfig& cfg, const StageFlags& flags) {
    cfg.validate();
    if (stage == "gen-channels") return run_gen_channels(cfg, flags);
    if (stage == "meta-train") return run_meta_train(cfg, flags);
    if (stage == "fine-tune") return run_fine_tune(cfg, flags);
    if (stage == "train-cgan") return run_train_cgan(cfg, flags);
    if (stage == "synthesize") return run_synthesize(cfg, flags);
    if (stage == "train-estimator") return run_train_estimator(cfg, flags);
    if (stage == "evaluate") return run_evaluate(cfg, flags);
    if (stage == "smote") return run_smote(cfg, flags);
    if (stage == "flops-report") return run_flops_report(cfg, flags);
    if (stage == "diagnostics") return run_diagnostics(cfg, flags);
    if (stage == "repro-fig3a") return run_repro_fig3a(cfg, flags);
    throw wdc::ConfigError("unknown stage \"" + stage + "\"");
}

void run_from_manifest(const std::string& manifest_path, const std::string& out_dir) {
    std::ifstream in(manifest_path);
    if (!in) throw wdc::IoError("cannot open " + manifest_path + " for reading");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw wdc::ParseError(manifest_path + ": " + e.what());
    }
    for (const char* key : {"stage", "config", "flags", "inputs"})
        if (!j.contains(key))
            throw wdc::FormatError(manifest_path + ": missing manifest field \"" + key + "\"");

    wdc::PipelineConfig cfg = wdc::config_from_json_text(j.at("config").dump());
    cfg.out_dir = out_dir;
    const StageFlags flags = flags_from_json(j.at("flags"));

    // Inputs must be bit-identical to what the recorded run consumed.
    for (const auto& [path, digest] : j.at("inputs").items()) {
        const std::string current = wdc::digest_hex(wdc::file_digest(path));
        if (current != digest.get<std::string>())
            throw wdc::CompatibilityError(path + ": input digest " + current +
                                          " does not match manifest digest " +
                                          digest.get<std::string>());
    }
    dispatch(j.at("stage").get<std::string>(), cfg, flags);
}

struct OptionBinding {
    CLI::Option* opt;
    std::function<void(wdc::PipelineConfig&, const wdc::PipelineConfig&)> copy;
};

// Registers every pipeline option on `cmd`, bound into `parsed`.
// Returns the bindings needed to replay explicit settings on top of a
// preset.
void add_pipeline_options(CLI::App* cmd, wdc::PipelineConfig& parsed, std::string& scale_name,
                          std::vector<OptionBinding>& bindings) {
    cmd->set_config("--config", "", "TOML configuration file");
    cmd->add_option("--scale", scale_name, "Preset: desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}));

    const auto bind = [&](CLI::Option* opt, auto member) {
        bindings.push_back({opt, [member](wdc::PipelineConfig& dst, const wdc::PipelineConfig& src) {
                                dst.*member = src.*member;
                            }});
    };

    bind(cmd->add_option("--seed", parsed.seed, "Experiment seed"), &wdc::PipelineConfig::seed);
    bind(cmd->add_option("--out-dir", parsed.out_dir, "Output directory"),
         &wdc::PipelineConfig::out_dir);
    bind(cmd->add_option("--nt", parsed.nt, "Transmit antennas"), &wdc::PipelineConfig::nt);
    bind(cmd->add_option("--num_paths", parsed.num_paths, "Propagation paths L"),
         &wdc::PipelineConfig::num_paths);
    bind(cmd->add_option("--power_gain", parsed.power_gain, "Channel gain numerator P0"),
         &wdc::PipelineConfig::power_gain);
    bind(cmd->add_option("--distance_m", parsed.distance_m, "Link distance R in meters"),
         &wdc::PipelineConfig::distance_m);
    bind(cmd->add_option("--meta_freqs_ghz", parsed.meta_freqs_ghz,
                         "Meta-training center frequencies (GHz)"),
         &wdc::PipelineConfig::meta_freqs_ghz);
    bind(cmd->add_option("--target_freq_ghz", parsed.target_freq_ghz,
                         "Fine-tuning target frequency (GHz)"),
         &wdc::PipelineConfig::target_freq_ghz);
    bind(cmd->add_option("--meta_samples_per_env", parsed.meta_samples_per_env,
                         "Genie samples per meta environment"),
         &wdc::PipelineConfig::meta_samples_per_env);
    bind(cmd->add_option("--target_samples", parsed.target_samples,
                         "Genie samples of the target environment"),
         &wdc::PipelineConfig::target_samples);
    bind(cmd->add_option("--synth_train_samples", parsed.synth_train_samples,
                         "Synthesized estimator-training samples"),
         &wdc::PipelineConfig::synth_train_samples);
    bind(cmd->add_option("--test_samples", parsed.test_samples, "Genie test samples"),
         &wdc::PipelineConfig::test_samples);
    bind(cmd->add_option("--noise_dim", parsed.noise_dim, "Generator noise dimension"),
         &wdc::PipelineConfig::noise_dim);
    bind(cmd->add_option("--gen_hidden", parsed.gen_hidden, "Generator hidden widths"),
         &wdc::PipelineConfig::gen_hidden);
    bind(cmd->add_option("--disc_hidden", parsed.disc_hidden, "Discriminator hidden widths"),
         &wdc::PipelineConfig::disc_hidden);
    bind(cmd->add_option("--loss_variant", parsed.loss_variant,
                         "Generator loss: minimax or non_saturating"),
         &wdc::PipelineConfig::loss_variant);
    bind(cmd->add_option("--alpha", parsed.alpha, "Inner-loop step size"),
         &wdc::PipelineConfig::alpha);
    bind(cmd->add_option("--beta", parsed.beta, "Meta step size"), &wdc::PipelineConfig::beta);
    bind(cmd->add_option("--gamma", parsed.gamma, "Fine-tune step size"),
         &wdc::PipelineConfig::gamma);
    bind(cmd->add_option("--inner_steps", parsed.inner_steps, "Inner GAN steps per environment"),
         &wdc::PipelineConfig::inner_steps);
    bind(cmd->add_option("--meta_iters", parsed.meta_iters, "Meta iterations"),
         &wdc::PipelineConfig::meta_iters);
    bind(cmd->add_option("--fine_tune_iters", parsed.fine_tune_iters, "Fine-tune iterations"),
         &wdc::PipelineConfig::fine_tune_iters);
    bind(cmd->add_option("--batch_size", parsed.batch_size, "GAN minibatch size"),
         &wdc::PipelineConfig::batch_size);
    bind(cmd->add_option("--log_interval", parsed.log_interval, "Meta-trace cadence"),
         &wdc::PipelineConfig::log_interval);
    bind(cmd->add_option("--eval_samples", parsed.eval_samples,
                         "Synthesized samples per condition at trace points"),
         &wdc::PipelineConfig::eval_samples);
    bind(cmd->add_option("--cgan_iters", parsed.cgan_iters, "Plain-CGAN training iterations"),
         &wdc::PipelineConfig::cgan_iters);
    bind(cmd->add_option("--cgan_lr", parsed.cgan_lr, "Plain-CGAN adam learning rate"),
         &wdc::PipelineConfig::cgan_lr);
    bind(cmd->add_option("--num_pilots", parsed.num_pilots, "Pilot beams Np"),
         &wdc::PipelineConfig::num_pilots);
    bind(cmd->add_option("--snr_grid_db", parsed.snr_grid_db, "Evaluation SNR grid (dB)"),
         &wdc::PipelineConfig::snr_grid_db);
    bind(cmd->add_option("--est_epochs", parsed.est_epochs, "Estimator training epochs"),
         &wdc::PipelineConfig::est_epochs);
    bind(cmd->add_option("--est_hidden_layers", parsed.est_hidden_layers,
                         "Estimator hidden layers"),
         &wdc::PipelineConfig::est_hidden_layers);
    bind(cmd->add_option("--est_hidden_width", parsed.est_hidden_width, "Estimator hidden width"),
         &wdc::PipelineConfig::est_hidden_width);
    bind(cmd->add_option("--est_batch_size", parsed.est_batch_size, "Estimator minibatch size"),
         &wdc::PipelineConfig::est_batch_size);
    bind(cmd->add_option("--est_lr", parsed.est_lr, "Estimator adam learning rate"),
         &wdc::PipelineConfig::est_lr);
    bind(cmd->add_option("--gain_eval_samples", parsed.gain_eval_samples,
                         "Samples synthesized per gain measurement"),
         &wdc::PipelineConfig::gain_eval_samples);
    bind(cmd->add_option("--num_seeds", parsed.num_seeds, "Seeds run by repro-fig3a"),
         &wdc::PipelineConfig::num_seeds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wdc: wireless channel dataset synthesis with meta-trained conditional GANs"};
    app.set_version_flag("--version", std::string("wdc ") + kVersion);
    app.require_subcommand(0, 1);

    std::string from_manifest;
    std::string manifest_out_dir = "out";
    app.add_option("--from-manifest", from_manifest,
                   "Replay the stage recorded in a manifest file");
    app.add_option("--out-dir", manifest_out_dir, "Output directory for --from-manifest");

    wdc::PipelineConfig parsed;
    std::string scale_name = "desk";
    std::vector<OptionBinding> bindings;
    StageFlags flags;

    const struct {
        const char* name;
        const char* help;
    } stages[] = {
        {"gen-channels", "Generate genie channel datasets for every environment"},
        {"meta-train", "Meta-train the conditional GAN over the meta environments"},
        {"fine-tune", "Fine-tune a meta-trained GAN on the target samples"},
        {"train-cgan", "Train the no-meta conditional GAN baseline from scratch"},
        {"synthesize", "Generate channel samples from a trained GAN checkpoint"},
        {"train-estimator", "Train the channel estimator on one dataset"},
        {"evaluate", "Evaluate a trained estimator on a test dataset"},
        {"smote", "Generate samples by nearest-neighbor interpolation"},
        {"flops-report", "Report per-sample generation cost of GAN vs interpolation"},
        {"diagnostics", "Path gains, TV distances, and the loss-gap report"},
        {"repro-fig3a", "Full pipeline: meta-train, fine-tune, baselines, estimator curves"},
    };

    std::map<std::string, CLI::App*> subs;
    for (const auto& stage : stages) {
        CLI::App* cmd = app.add_subcommand(stage.name, stage.help);
        add_pipeline_options(cmd, parsed, scale_name, bindings);
        if (std::string(stage.name) != "gen-channels" && std::string(stage.name) != "repro-fig3a" &&
            std::string(stage.name) != "flops-report")
            cmd->add_option("--data-dir", flags.data_dir,
                            "Directory holding upstream stage outputs (default: --out-dir)");
        subs[stage.name] = cmd;
    }
    subs["fine-tune"]->add_option("--gan", flags.gan_path, "Meta-trained GAN checkpoint");
    subs["synthesize"]->add_option("--gan", flags.gan_path, "GAN checkpoint to sample from");
    subs["diagnostics"]->add_option("--gan", flags.gan_path, "GAN checkpoint to diagnose");
    subs["synthesize"]->add_option("--condition", flags.condition,
                                   "Condition index (default: target environment)");
    subs["synthesize"]->add_option("--count", flags.count, "Samples to synthesize");
    subs["synthesize"]->add_option("--sample-scale", flags.sample_scale,
                                   "Stored scale of the output dataset");
    subs["synthesize"]->add_option("--scale-from", flags.scale_from,
                                   "Copy the stored scale from this dataset file");
    subs["train-estimator"]->add_option("--train", flags.train_path, "Training dataset (WDC1)");
    subs["train-estimator"]->add_option("--label", flags.label, "Label for the checkpoint name");
    subs["evaluate"]->add_option("--net", flags.net_path, "Estimator checkpoint");
    subs["evaluate"]->add_option("--test", flags.test_path, "Test dataset (WDC1)");
    subs["evaluate"]->add_option("--label", flags.label, "Label written into the CSV");
    subs["smote"]->add_option("--input", flags.input_path, "Base dataset (WDC1)");
    subs["smote"]->add_option("--k", flags.smote_k, "Neighbors per base sample");
    subs["smote"]->add_option("--count", flags.count, "Samples to generate");
    subs["flops-report"]->add_option("--smote-n", flags.flops_n,
                                     "Dataset size assumed for the interpolation cost");
    subs["flops-report"]->add_option("--smote-dim", flags.flops_dim,
                                     "Vector dimension assumed for the interpolation cost");
    subs["flops-report"]->add_option("--smote-k", flags.flops_k,
                                     "Neighbor count assumed for the interpolation cost");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!from_manifest.empty()) {
            if (!app.get_subcommands().empty())
                throw wdc::ConfigError("--from-manifest replaces the subcommand; give only one");
            run_from_manifest(from_manifest, manifest_out_dir);
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help() << "\n";
            return 1;
        }
        CLI::App* chosen = app.get_subcommands().front();

        // Start from the preset, then replay every explicitly set option
        // (command line or config file) on top of it.
        wdc::PipelineConfig cfg = wdc::preset_config(scale_name);
        for (const auto& binding : bindings)
            if (binding.opt->count() > 0) binding.copy(cfg, parsed);
        dispatch(chosen->get_name(), cfg, flags);
        return 0;
    } catch (const wdc::Error& e) {
        std::cerr << "wdc: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "wdc: internal error: " << e.what() << "\n";
        return 1;
    }
}
