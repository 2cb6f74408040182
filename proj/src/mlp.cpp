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

#include "wdc/mlp.hpp"

#include <cmath>
#include <sstream>

#include "wdc/error.hpp"

namespace wdc {

void MlpSpec::validate() const {
    if (widths.size() < 2) throw InvalidArgument("mlp: need at least input and output widths");
    for (int w : widths)
        if (w < 1) throw InvalidArgument("mlp: all widths must be >= 1");
    if (hidden == HiddenAct::leaky_relu && !(leaky_slope > 0.0 && leaky_slope < 1.0))
        throw InvalidArgument("mlp: leaky slope must be in (0, 1)");
}

std::size_t MlpSpec::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
        n += static_cast<std::size_t>(widths[l]) * widths[l + 1] + widths[l + 1];
    return n;
}

std::string MlpSpec::canonical() const {
    std::ostringstream os;
    os << "mlp[";
    for (std::size_t i = 0; i < widths.size(); ++i) os << (i ? "," : "") << widths[i];
    os << "];hidden=";
    if (hidden == HiddenAct::relu) {
        os << "relu";
    } else {
        os.precision(17);
        os << "leaky_relu(" << leaky_slope << ")";
    }
    os << ";output=" << (output == OutputAct::linear ? "linear" : "sigmoid");
    return os.str();
}

ParamVector init_params(const MlpSpec& spec, Rng& rng) {
    spec.validate();
    ParamVector p(spec.param_count());
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        const int in = spec.widths[l];
        const int out = spec.widths[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(in));
        for (int i = 0; i < in * out; ++i) p[off++] = rng.uniform(-bound, bound);
        for (int i = 0; i < out; ++i) p[off++] = 0.0;  // biases
    }
    return p;
}

namespace {

inline double hidden_act(const MlpSpec& spec, double z) {
    if (spec.hidden == HiddenAct::relu) return z > 0.0 ? z : 0.0;
    return z > 0.0 ? z : spec.leaky_slope * z;
}

inline double hidden_act_deriv(const MlpSpec& spec, double z) {
    if (spec.hidden == HiddenAct::relu) return z > 0.0 ? 1.0 : 0.0;
    return z > 0.0 ? 1.0 : spec.leaky_slope;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

std::vector<double> forward(const MlpSpec& spec, const ParamVector& params,
                            std::span<const double> input, ForwardTrace* trace) {
    spec.validate();
    if (params.size() != spec.param_count())
        throw InvalidArgument("forward: parameter vector length mismatch");
    if (input.size() != static_cast<std::size_t>(spec.input_width()))
        throw InvalidArgument("forward: input length " + std::to_string(input.size()) +
                              " != " + std::to_string(spec.input_width()));

    const std::size_t layers = spec.num_layers();
    std::vector<double> a(input.begin(), input.end());
    if (trace) {
        trace->pre.assign(layers, {});
        trace->act.assign(layers + 1, {});
        trace->act[0] = a;
    }

    std::size_t off = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        const int in = spec.widths[l];
        const int out = spec.widths[l + 1];
        const double* w = params.data() + off;
        const double* b = params.data() + off + static_cast<std::size_t>(in) * out;
        std::vector<double> z(out);
        for (int o = 0; o < out; ++o) {
            const double* row = w + static_cast<std::size_t>(o) * in;
            double acc = b[o];
            for (int i = 0; i < in; ++i) acc += row[i] * a[i];
            z[o] = acc;
        }
        const bool last = (l + 1 == layers);
        std::vector<double> next(out);
        if (!last) {
            for (int o = 0; o < out; ++o) next[o] = hidden_act(spec, z[o]);
        } else if (spec.output == OutputAct::sigmoid) {
            for (int o = 0; o < out; ++o) next[o] = sigmoid(z[o]);
        } else {
            next = z;
        }
        if (trace) {
            trace->pre[l] = std::move(z);
            trace->act[l + 1] = next;
        }
        a = std::move(next);
        off += static_cast<std::size_t>(in) * out + out;
    }
    return a;
}

Gradients backward(const MlpSpec& spec, const ParamVector& params, const ForwardTrace& trace,
                   std::span<const double> output_grad) {
    const std::size_t layers = spec.num_layers();
    if (trace.pre.size() != layers || trace.act.size() != layers + 1)
        throw InvalidArgument("backward: trace does not match spec");
    if (output_grad.size() != static_cast<std::size_t>(spec.output_width()))
        throw InvalidArgument("backward: output_grad length mismatch");

    Gradients g;
    g.params.assign(spec.param_count(), 0.0);

    // Layer parameter offsets.
    std::vector<std::size_t> offs(layers);
    std::size_t off = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        offs[l] = off;
        off += static_cast<std::size_t>(spec.widths[l]) * spec.widths[l + 1] + spec.widths[l + 1];
    }

    // dz for the output layer.
    std::vector<double> dz(output_grad.begin(), output_grad.end());
    if (spec.output == OutputAct::sigmoid) {
        const auto& y = trace.act[layers];
        for (std::size_t o = 0; o < dz.size(); ++o) dz[o] *= y[o] * (1.0 - y[o]);
    }

    for (std::size_t l = layers; l-- > 0;) {
        const int in = spec.widths[l];
        const int out = spec.widths[l + 1];
        const double* w = params.data() + offs[l];
        const auto& a_prev = trace.act[l];
        double* gw = g.params.data() + offs[l];
        double* gb = gw + static_cast<std::size_t>(in) * out;

        for (int o = 0; o < out; ++o) {
            const double d = dz[o];
            double* grow = gw + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) grow[i] = d * a_prev[i];
            gb[o] = d;
        }

        // da_prev = W^T dz, then through the previous layer's activation.
        std::vector<double> da(in, 0.0);
        for (int o = 0; o < out; ++o) {
            const double d = dz[o];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) da[i] += row[i] * d;
        }
        if (l == 0) {
            g.input = std::move(da);
        } else {
            const auto& z_prev = trace.pre[l - 1];
            dz.assign(in, 0.0);
            for (int i = 0; i < in; ++i) dz[i] = da[i] * hidden_act_deriv(spec, z_prev[i]);
        }
    }
    return g;
}

Gradients backward(const MlpSpec& spec, const ParamVector& params, std::span<const double> input,
                   std::span<const double> output_grad) {
    ForwardTrace trace;
    forward(spec, params, input, &trace);
    return backward(spec, params, trace, output_grad);
}

ParamVector finite_diff_grad(const std::function<double(const ParamVector&)>& loss,
                             const ParamVector& params, double step) {
    if (!(step > 0.0)) throw InvalidArgument("finite_diff_grad: step must be > 0");
    ParamVector g(params.size());
    ParamVector p = params;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double saved = p[i];
        p[i] = saved + step;
        const double up = loss(p);
        p[i] = saved - step;
        const double down = loss(p);
        p[i] = saved;
        g[i] = (up - down) / (2.0 * step);
    }
    return g;
}

}  // namespace wdc
