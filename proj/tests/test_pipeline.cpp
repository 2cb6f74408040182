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
#include <sstream>
#include <string>

#include "wdc/error.hpp"
#include "wdc/metrics.hpp"
#include "wdc/pipeline.hpp"

using namespace wdc;

namespace {

PipelineConfig micro_config() {
    PipelineConfig cfg = desk_config();
    cfg.meta_samples_per_env = 40;
    cfg.target_samples = 30;
    cfg.synth_train_samples = 50;
    cfg.test_samples = 50;
    cfg.seed = 5;
    return cfg;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("presets validate and differ in scale") {
    const PipelineConfig desk = desk_config();
    CHECK_NOTHROW(desk.validate());
    const PipelineConfig paper = paper_config();
    CHECK_NOTHROW(paper.validate());
    CHECK(desk.meta_samples_per_env < paper.meta_samples_per_env);
    CHECK(desk.meta_iters < paper.meta_iters);
    CHECK(paper.meta_samples_per_env == 20000);
    CHECK(paper.target_samples == 800);

    CHECK(preset_config("desk").meta_iters == desk.meta_iters);
    CHECK(preset_config("paper").meta_iters == paper.meta_iters);
    CHECK_THROWS_AS(preset_config("giant"), ConfigError);
}

TEST_CASE("config validation names the offending field") {
    PipelineConfig cfg = desk_config();
    cfg.meta_freqs_ghz.clear();
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("meta_freqs_ghz") != std::string::npos);
    }

    cfg = desk_config();
    cfg.alpha = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = desk_config();
    cfg.num_seeds = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = desk_config();
    cfg.loss_variant = "sometimes";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config json round-trip is lossless and excludes the output directory") {
    PipelineConfig cfg = desk_config();
    cfg.seed = 99;
    cfg.meta_freqs_ghz = {28.0, 37.5};
    cfg.target_freq_ghz = 40.25;
    cfg.out_dir = "/somewhere/else";

    const std::string text = config_to_json_text(cfg);
    CHECK(text.find("out_dir") == std::string::npos);
    CHECK(text.find("somewhere") == std::string::npos);

    const PipelineConfig back = config_from_json_text(text);
    CHECK(back.seed == 99);
    CHECK(back.meta_freqs_ghz == cfg.meta_freqs_ghz);
    CHECK(back.target_freq_ghz == cfg.target_freq_ghz);
    CHECK(back.meta_iters == cfg.meta_iters);
    CHECK(back.est_lr == cfg.est_lr);
    // Serialization is stable: a second round trip is textually identical.
    CHECK(config_to_json_text(back) == text);
}

TEST_CASE("config parsing reports unknown fields") {
    const std::string text = R"({"seed": 3, "definitely_not_a_field": 1})";
    try {
        config_from_json_text(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("definitely_not_a_field") != std::string::npos);
    }
    CHECK_THROWS_AS(config_from_json_text("{"), ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"seed": "not a number"})"), ConfigError);
}

TEST_CASE("missing fields fall back to preset defaults") {
    const PipelineConfig cfg = config_from_json_text(R"({"seed": 17})");
    const PipelineConfig desk = desk_config();
    CHECK(cfg.seed == 17);
    CHECK(cfg.meta_iters == desk.meta_iters);
    CHECK(cfg.nt == desk.nt);
}

TEST_CASE("environment generation shares one scale across all conditions") {
    const PipelineConfig cfg = micro_config();
    const EnvironmentSet env = generate_environments(cfg, cfg.seed);

    REQUIRE(env.meta.size() == cfg.meta_freqs_ghz.size());
    CHECK(env.scale > 0.0);
    for (const auto& ds : env.meta) CHECK(ds.scale == env.scale);
    CHECK(env.target_train.scale == env.scale);
    CHECK(env.genie_train.scale == env.scale);
    CHECK(env.test.scale == env.scale);

    CHECK(env.meta[0].size() == static_cast<std::size_t>(cfg.meta_samples_per_env));
    CHECK(env.target_train.size() == static_cast<std::size_t>(cfg.target_samples));
    CHECK(env.genie_train.size() == static_cast<std::size_t>(cfg.synth_train_samples));
    CHECK(env.test.size() == static_cast<std::size_t>(cfg.test_samples));

    // Conditions: meta environments take 0..M-1, the target takes M.
    for (std::size_t i = 0; i < env.meta.size(); ++i)
        CHECK(env.meta[i].condition_index == static_cast<int>(i));
    CHECK(env.target_train.condition_index == cfg.target_condition());
    CHECK(env.test.condition_index == cfg.target_condition());
}

TEST_CASE("the shared scale squares to the mean meta path gain") {
    const PipelineConfig cfg = micro_config();
    const EnvironmentSet env = generate_environments(cfg, cfg.seed);
    double mean_gain = 0.0;
    for (const auto& ds : env.meta) mean_gain += path_gain(ds) / env.meta.size();
    CHECK(env.scale * env.scale == doctest::Approx(mean_gain).epsilon(1e-9));
}

TEST_CASE("environment generation is deterministic per seed and varies across seeds") {
    const PipelineConfig cfg = micro_config();
    const EnvironmentSet a = generate_environments(cfg, 7);
    const EnvironmentSet b = generate_environments(cfg, 7);
    const EnvironmentSet c = generate_environments(cfg, 8);
    CHECK(a.test.samples == b.test.samples);
    CHECK(a.meta[1].samples == b.meta[1].samples);
    CHECK(a.test.samples != c.test.samples);
}

TEST_CASE("helper factories derive consistent sub-configurations") {
    const PipelineConfig cfg = desk_config();
    const GanSpec spec = pipeline_gan_spec(cfg);
    CHECK(spec.num_envs == cfg.num_envs());
    CHECK(spec.data_dim == 2 * cfg.nt);
    CHECK_NOTHROW(spec.validate());

    const MetaConfig mcfg = pipeline_meta_config(cfg, 123);
    CHECK(mcfg.seed == 123);
    CHECK(mcfg.alpha == cfg.alpha);
    CHECK(mcfg.meta_iters == cfg.meta_iters);
    CHECK_NOTHROW(mcfg.validate());

    const PilotConfig pcfg = pipeline_pilot_config(cfg, cfg.seed);
    CHECK(pcfg.nt == cfg.nt);
    CHECK(pcfg.num_pilots == cfg.num_pilots);
    CHECK_NOTHROW(pcfg.validate());

    const ChannelConfig ch = channel_config_for(cfg, 39.0, 11);
    CHECK(ch.center_freq_ghz == 39.0);
    CHECK(ch.seed == 11);
    CHECK_NOTHROW(ch.validate());
}

TEST_CASE("trace csv exports carry the documented columns") {
    MetaTrace trace;
    MetaRecord rec;
    rec.iteration = 0;
    rec.inner_losses = {1.0, 2.0};
    rec.meta_loss = 3.0;
    rec.validation_loss = 0.5;
    rec.path_gains = {0.9, 0.8};
    trace.records.push_back(rec);

    const std::string csv = meta_trace_csv(trace);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "iteration,meta_loss,validation_loss,inner_loss_0,inner_loss_1,path_gain_0,path_gain_1");
    CHECK(count_lines(csv) == 2);

    const std::string ft = fine_tune_trace_csv({{1, 0.25, 0.75}});
    CHECK(ft.find("iteration,disc_loss,gen_loss") == 0);
    CHECK(count_lines(ft) == 2);
}

TEST_CASE("mse curve export emits one row per seed, label, and snr point") {
    Fig3aRun run;
    MethodCurve genie;
    genie.label = "genie";
    genie.eval.points = {{0.0, 0.5}, {5.0, 0.25}};
    MethodCurve meta;
    meta.label = "meta_gan";
    meta.eval.points = {{0.0, 0.6}, {5.0, 0.3}};
    run.curves = {genie, meta};
    const std::string csv = mse_curves_csv({{3, run}, {4, run}});
    CHECK(csv.find("snr_db,nmse,dataset_label,seed") == 0);
    CHECK(count_lines(csv) == 1 + 2 * 2 * 2);
    CHECK(csv.find("genie,3") != std::string::npos);
    CHECK(csv.find("meta_gan,4") != std::string::npos);
}
