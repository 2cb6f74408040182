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

#include <utility>

#include "wdc/mlp.hpp"

namespace wdc {

enum class OptKind { sgd, adam };

/// First-order optimizer as a value. Adam state (moments, step counter)
/// lives here; sgd carries only the learning rate.
struct OptimizerState {
    OptKind kind = OptKind::sgd;
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;

    static OptimizerState make_sgd(double lr);
    static OptimizerState make_adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                                    double eps = 1e-8);
};

/// One update. sgd: params - lr * grads. adam: bias-corrected moments.
/// Pure function of its inputs; throws NumericError (naming the first
/// offending index) if grads contain a non-finite value.
std::pair<ParamVector, OptimizerState> optimizer_step(const OptimizerState& state,
                                                      const ParamVector& params,
                                                      const ParamVector& grads);

}  // namespace wdc
