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

#include "wdc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "wdc/dataio.hpp"
#include "wdc/error.hpp"
#include "wdc/optim.hpp"

namespace wdc {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

double mean_raw_power(const WirelessDataset& ds) {
    double sum = 0.0;
    for (const auto& h : ds.samples) sum += sample_power(h);
    return ds.scale * ds.scale * sum / static_cast<double>(ds.samples.size());
}

// Normalization divisor; degenerate all-zero populations fall back to 1
// so the zero-channel edge cases stay evaluable.
double norm_factor(double ref_power) { return ref_power > 0.0 ? std::sqrt(ref_power) : 1.0; }

MlpSpec estimator_spec(const PilotConfig& cfg, const EstimatorHyper& hyper) {
    if (hyper.hidden_layers < 1)
        throw InvalidArgument("EstimatorHyper: hidden_layers must be >= 1");
    if (hyper.hidden_width < 1) throw InvalidArgument("EstimatorHyper: hidden_width must be >= 1");
    MlpSpec spec;
    spec.widths.push_back(2 * cfg.num_pilots);
    for (int i = 0; i < hyper.hidden_layers; ++i) spec.widths.push_back(hyper.hidden_width);
    spec.widths.push_back(2 * cfg.nt);
    spec.hidden = HiddenAct::relu;
    spec.output = OutputAct::linear;
    return spec;
}

std::uint64_t estimator_digest(const MlpSpec& spec, const PilotConfig& cfg) {
    return fnv1a64("estimator{" + spec.canonical() + "," + cfg.canonical() + "}");
}

}  // namespace

void PilotConfig::validate() const {
    if (nt < 1) throw InvalidArgument("PilotConfig: nt must be >= 1");
    if (num_pilots < 1 || num_pilots > nt)
        throw InvalidArgument("PilotConfig: need 1 <= num_pilots <= nt");
    if (pilots.size() != static_cast<std::size_t>(num_pilots))
        throw InvalidArgument("PilotConfig: pilot column count does not match num_pilots");
    for (const auto& col : pilots) {
        if (col.size() != static_cast<std::size_t>(nt))
            throw InvalidArgument("PilotConfig: pilot column length does not match nt");
        double norm2 = 0.0;
        for (const auto& z : col) norm2 += std::norm(z);
        if (std::abs(norm2 - 1.0) > 1e-9)
            throw InvalidArgument("PilotConfig: pilot columns must be unit-norm");
    }
    if (snr_grid_db.empty()) throw InvalidArgument("PilotConfig: snr grid is empty");
    for (double s : snr_grid_db)
        if (!std::isfinite(s)) throw InvalidArgument("PilotConfig: snr grid entries must be finite");
}

std::string PilotConfig::canonical() const {
    std::ostringstream out;
    out << "pilots{nt=" << nt << ",np=" << num_pilots << ",cols=[";
    for (std::size_t p = 0; p < pilots.size(); ++p) {
        if (p) out << ";";
        for (std::size_t a = 0; a < pilots[p].size(); ++a) {
            if (a) out << ",";
            out << fmt17(pilots[p][a].real()) << "+" << fmt17(pilots[p][a].imag()) << "i";
        }
    }
    out << "],snr=[";
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        if (i) out << ",";
        out << fmt17(snr_grid_db[i]);
    }
    out << "]}";
    return out.str();
}

std::vector<ComplexVec> make_dft_pilots(int nt, int np) {
    if (nt < 1) throw InvalidArgument("make_dft_pilots: nt must be >= 1");
    if (np < 1 || np > nt) throw InvalidArgument("make_dft_pilots: need 1 <= np <= nt");
    std::vector<ComplexVec> cols(static_cast<std::size_t>(np));
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(nt));
    for (int p = 0; p < np; ++p) {
        ComplexVec col(static_cast<std::size_t>(nt));
        for (int a = 0; a < nt; ++a) {
            const double phase = -2.0 * std::numbers::pi * a * p / static_cast<double>(nt);
            col[static_cast<std::size_t>(a)] = {inv_sqrt * std::cos(phase),
                                                inv_sqrt * std::sin(phase)};
        }
        cols[static_cast<std::size_t>(p)] = std::move(col);
    }
    return cols;
}

PilotConfig make_pilot_config(int nt, int np, std::vector<double> snr_grid_db,
                              std::uint64_t seed) {
    PilotConfig cfg;
    cfg.nt = nt;
    cfg.num_pilots = np;
    cfg.pilots = make_dft_pilots(nt, np);
    cfg.snr_grid_db = std::move(snr_grid_db);
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

void EstimatorNet::validate() const {
    spec.validate();
    pilot_cfg.validate();
    if (spec.input_width() != 2 * pilot_cfg.num_pilots)
        throw InvalidArgument("EstimatorNet: input width must be 2 * num_pilots");
    if (spec.output_width() != 2 * pilot_cfg.nt)
        throw InvalidArgument("EstimatorNet: output width must be 2 * nt");
    if (params.size() != spec.param_count())
        throw InvalidArgument("EstimatorNet: parameter count mismatch");
    if (!(ref_power >= 0.0) || !std::isfinite(ref_power))
        throw InvalidArgument("EstimatorNet: ref_power must be finite and >= 0");
}

EstimatorNet init_estimator(const PilotConfig& cfg, const EstimatorHyper& hyper,
                            std::uint64_t seed) {
    cfg.validate();
    EstimatorNet net;
    net.spec = estimator_spec(cfg, hyper);
    Rng rng(derive_seed(seed, 0));
    net.params = init_params(net.spec, rng);
    net.pilot_cfg = cfg;
    net.ref_power = 1.0;
    return net;
}

std::vector<double> simulate_pilots(const ComplexVec& h, const PilotConfig& cfg, double snr_db,
                                    double ref_power, Rng& rng) {
    if (h.size() != static_cast<std::size_t>(cfg.nt))
        throw InvalidArgument("simulate_pilots: channel length does not match nt");
    if (!(ref_power >= 0.0)) throw InvalidArgument("simulate_pilots: ref_power must be >= 0");
    const double sigma2 = ref_power * std::pow(10.0, -snr_db / 10.0);

    std::vector<double> out;
    out.reserve(2 * static_cast<std::size_t>(cfg.num_pilots));
    for (const auto& col : cfg.pilots) {
        std::complex<double> y = 0.0;
        for (std::size_t a = 0; a < h.size(); ++a) y += std::conj(col[a]) * h[a];
        y += rng.cgaussian(sigma2);
        out.push_back(y.real());
        out.push_back(y.imag());
    }
    return out;
}

ComplexVec estimate_channel(const EstimatorNet& net, const std::vector<double>& observation) {
    if (static_cast<int>(observation.size()) != net.spec.input_width())
        throw InvalidArgument("estimate_channel: observation length mismatch");
    const double norm = norm_factor(net.ref_power);
    std::vector<double> in(observation);
    for (double& v : in) v /= norm;
    std::vector<double> out = forward(net.spec, net.params, in);
    for (double& v : out) v *= norm;
    return unflatten(out);
}

EstimatorNet train_estimator(const WirelessDataset& train_set, const PilotConfig& cfg, int epochs,
                             Rng& rng, const EstimatorHyper& hyper) {
    if (train_set.samples.empty()) throw InvalidArgument("train_estimator: training set is empty");
    if (epochs < 0) throw InvalidArgument("train_estimator: epochs must be >= 0");
    cfg.validate();
    if (train_set.nt != cfg.nt)
        throw InvalidArgument("train_estimator: dataset nt does not match pilot config");
    if (hyper.batch_size < 1) throw InvalidArgument("train_estimator: batch_size must be >= 1");

    EstimatorNet net = init_estimator(cfg, hyper, rng.next_u64());
    net.ref_power = mean_raw_power(train_set);
    const double norm = norm_factor(net.ref_power);

    OptimizerState opt = OptimizerState::make_adam(hyper.learning_rate);
    const std::size_t n = train_set.samples.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::vector<std::vector<double>> inputs, targets;
    const auto flush_batch = [&]() {
        if (inputs.empty()) return;
        const double inv_m = 1.0 / static_cast<double>(inputs.size());
        ParamVector grad(net.params.size(), 0.0);
        for (std::size_t b = 0; b < inputs.size(); ++b) {
            ForwardTrace trace;
            const auto out = forward(net.spec, net.params, inputs[b], &trace);
            std::vector<double> og(out.size());
            for (std::size_t j = 0; j < out.size(); ++j)
                og[j] = 2.0 * (out[j] - targets[b][j]) * inv_m;
            const auto g = backward(net.spec, net.params, trace, og);
            for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += g.params[j];
        }
        auto [params, next_opt] = optimizer_step(opt, net.params, grad);
        net.params = std::move(params);
        opt = std::move(next_opt);
        inputs.clear();
        targets.clear();
    };

    for (int e = 0; e < epochs; ++e) {
        // Fisher-Yates shuffle; one swap per position, drawn in order.
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = rng.uniform_index(i);
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t idx : order) {
            const ComplexVec h = raw_sample(train_set, idx);
            const double snr = cfg.snr_grid_db[rng.uniform_index(cfg.snr_grid_db.size())];
            std::vector<double> obs = simulate_pilots(h, cfg, snr, net.ref_power, rng);
            for (double& v : obs) v /= norm;
            std::vector<double> target = flatten(h);
            for (double& v : target) v /= norm;
            inputs.push_back(std::move(obs));
            targets.push_back(std::move(target));
            if (static_cast<int>(inputs.size()) == hyper.batch_size) flush_batch();
        }
        flush_batch();
    }
    return net;
}

EvalResult eval_mse(const EstimatorNet& net, const WirelessDataset& test_set,
                    const PilotConfig& cfg, Rng& rng) {
    if (test_set.samples.empty()) throw InvalidArgument("eval_mse: test set is empty");
    net.validate();
    cfg.validate();
    if (test_set.nt != cfg.nt)
        throw InvalidArgument("eval_mse: dataset nt does not match pilot config");
    if (2 * cfg.num_pilots != net.spec.input_width())
        throw CompatibilityError("eval_mse: pilot count does not match the net's input width");

    const double test_power = mean_raw_power(test_set);

    EvalResult result;
    for (std::size_t i = 0; i < test_set.samples.size(); ++i)
        if (sample_power(test_set.samples[i]) == 0.0) ++result.excluded;

    for (double snr : cfg.snr_grid_db) {
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < test_set.samples.size(); ++i) {
            const ComplexVec h = raw_sample(test_set, i);
            double h_norm2 = 0.0;
            for (const auto& z : h) h_norm2 += std::norm(z);
            if (h_norm2 == 0.0) continue;

            const auto obs = simulate_pilots(h, cfg, snr, test_power, rng);
            const ComplexVec h_hat = estimate_channel(net, obs);
            double err2 = 0.0;
            for (std::size_t a = 0; a < h.size(); ++a) err2 += std::norm(h_hat[a] - h[a]);
            sum += err2 / h_norm2;
            ++used;
        }
        if (used == 0) throw InvalidArgument("eval_mse: every test channel has zero norm");
        result.points.push_back({snr, sum / static_cast<double>(used)});
    }
    return result;
}

void save_estimator(const EstimatorNet& net, const std::string& path) {
    net.validate();
    ParamVector body = net.params;
    body.push_back(net.ref_power);
    save_checkpoint(estimator_digest(net.spec, net.pilot_cfg), body, path);
}

EstimatorNet load_estimator(const std::string& path, const PilotConfig& cfg,
                            const EstimatorHyper& hyper) {
    cfg.validate();
    EstimatorNet net;
    net.spec = estimator_spec(cfg, hyper);
    net.pilot_cfg = cfg;
    ParamVector body = load_checkpoint(path, estimator_digest(net.spec, cfg));
    if (body.size() != net.spec.param_count() + 1)
        throw CorruptionError(path + ": estimator checkpoint holds " + std::to_string(body.size()) +
                              " values, expected " + std::to_string(net.spec.param_count() + 1));
    net.ref_power = body.back();
    body.pop_back();
    net.params = std::move(body);
    net.validate();
    return net;
}

}  // namespace wdc
