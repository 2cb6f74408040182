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

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wdc/rng.hpp"

namespace wdc {

enum class HiddenAct { relu, leaky_relu };
enum class OutputAct { linear, sigmoid };

/// Architecture of a fully-connected network.
struct MlpSpec {
    std::vector<int> widths;  // input, hidden..., output
    HiddenAct hidden = HiddenAct::relu;
    double leaky_slope = 0.2;  // used when hidden == leaky_relu
    OutputAct output = OutputAct::linear;

    int input_width() const { return widths.front(); }
    int output_width() const { return widths.back(); }
    std::size_t num_layers() const { return widths.size() - 1; }

    /// Total parameter count: sum over layers of (in * out + out).
    std::size_t param_count() const;

    void validate() const;

    /// Stable textual form used for checkpoint digests.
    std::string canonical() const;
};

/// All weights and biases of one MlpSpec, flattened in canonical order:
/// layer by layer, weight matrix first (out x in, row-major: W[o*in + i]),
/// then the bias vector (out entries). This layout is part of the
/// checkpoint file contract.
using ParamVector = std::vector<double>;

/// He-uniform weights (bound sqrt(6 / fan_in)), zero biases. Weights are
/// drawn in canonical layout order.
ParamVector init_params(const MlpSpec& spec, Rng& rng);

/// Intermediate state of one forward pass, kept for backward.
/// act[0] is the input; act[l+1] and pre[l] belong to layer l.
struct ForwardTrace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> act;
};

std::vector<double> forward(const MlpSpec& spec, const ParamVector& params,
                            std::span<const double> input, ForwardTrace* trace = nullptr);

struct Gradients {
    ParamVector params;
    std::vector<double> input;
};

/// Reverse-mode gradients of the forward map contracted with output_grad.
/// The input gradient lets losses chain through one network into another.
Gradients backward(const MlpSpec& spec, const ParamVector& params, const ForwardTrace& trace,
                   std::span<const double> output_grad);

/// Convenience overload that reruns the forward pass internally.
Gradients backward(const MlpSpec& spec, const ParamVector& params, std::span<const double> input,
                   std::span<const double> output_grad);

/// Central finite differences of a scalar loss, coordinate by coordinate.
/// Test oracle for backward; step around 1e-5 suits f64.
ParamVector finite_diff_grad(const std::function<double(const ParamVector&)>& loss,
                             const ParamVector& params, double step);

}  // namespace wdc
