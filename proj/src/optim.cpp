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

#include "wdc/optim.hpp"

#include <cmath>
#include <string>

#include "wdc/error.hpp"

namespace wdc {

OptimizerState OptimizerState::make_sgd(double lr) {
    OptimizerState s;
    s.kind = OptKind::sgd;
    s.lr = lr;
    return s;
}

OptimizerState OptimizerState::make_adam(double lr, double beta1, double beta2, double eps) {
    OptimizerState s;
    s.kind = OptKind::adam;
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    return s;
}

std::pair<ParamVector, OptimizerState> optimizer_step(const OptimizerState& state,
                                                      const ParamVector& params,
                                                      const ParamVector& grads) {
    if (params.size() != grads.size())
        throw InvalidArgument("optimizer_step: params/grads length mismatch");
    for (std::size_t i = 0; i < grads.size(); ++i)
        if (!std::isfinite(grads[i]))
            throw NumericError("optimizer_step: non-finite gradient at index " + std::to_string(i));

    ParamVector out = params;
    OptimizerState next = state;

    if (state.kind == OptKind::sgd) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= state.lr * grads[i];
        return {std::move(out), std::move(next)};
    }

    // adam
    if (next.m.empty()) next.m.assign(params.size(), 0.0);
    if (next.v.empty()) next.v.assign(params.size(), 0.0);
    if (next.m.size() != params.size() || next.v.size() != params.size())
        throw InvalidArgument("optimizer_step: adam moment length mismatch");

    next.step = state.step + 1;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(next.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(next.step));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double g = grads[i];
        next.m[i] = state.beta1 * next.m[i] + (1.0 - state.beta1) * g;
        next.v[i] = state.beta2 * next.v[i] + (1.0 - state.beta2) * g * g;
        const double mhat = next.m[i] / c1;
        const double vhat = next.v[i] / c2;
        out[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
    return {std::move(out), std::move(next)};
}

}  // namespace wdc
