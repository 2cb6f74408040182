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
#include <vector>

#include "wdc/dataset.hpp"
#include "wdc/mlp.hpp"
#include "wdc/rng.hpp"

namespace wdc {

/// Pilot sounding setup: Np beamforming vectors observed under AWGN.
/// Columns of `pilots` are unit-norm beams; the observation of channel h
/// at one SNR point is y_p = f_p^H h + n_p per beam.
struct PilotConfig {
    int nt = 8;
    int num_pilots = 4;
    std::vector<ComplexVec> pilots;  // num_pilots columns, each length nt
    std::vector<double> snr_grid_db = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    std::uint64_t seed = 0;

    void validate() const;
    /// Stable textual form (17 significant digits) for checkpoint digests.
    std::string canonical() const;
};

/// First `np` columns of the nt-point unitary DFT matrix; each column has
/// unit norm, and with np = nt the beams form an orthonormal basis, so a
/// noiseless observation determines the channel exactly.
std::vector<ComplexVec> make_dft_pilots(int nt, int np);

/// PilotConfig with DFT pilots at the given sizes.
PilotConfig make_pilot_config(int nt, int np, std::vector<double> snr_grid_db, std::uint64_t seed);

/// Training hyperparameters for the estimator network.
struct EstimatorHyper {
    int hidden_layers = 5;
    int hidden_width = 256;
    int batch_size = 64;
    double learning_rate = 1e-3;  // adam
};

/// Channel-estimation network: encoded pilot observation (2*Np reals,
/// normalized by sqrt(ref_power)) in, encoded channel estimate (2*nt
/// reals, same normalization) out. `ref_power` is the mean raw channel
/// power of the training set; it is part of the model because inputs and
/// outputs only make sense in its units.
struct EstimatorNet {
    MlpSpec spec;
    ParamVector params;
    PilotConfig pilot_cfg;
    double ref_power = 1.0;

    void validate() const;
};

/// Fresh He-uniform net for the given pilot setup (no training).
EstimatorNet init_estimator(const PilotConfig& cfg, const EstimatorHyper& hyper,
                            std::uint64_t seed);

/// One noisy pilot observation of raw channel h: per beam p,
/// y_p = f_p^H h + n_p with n_p ~ CN(0, sigma^2),
/// sigma^2 = ref_power * 10^(-snr_db/10). Returned as interleaved
/// (Re, Im) pairs of length 2*Np. ref_power anchors the SNR definition to
/// the mean power of the channel population being observed.
std::vector<double> simulate_pilots(const ComplexVec& h, const PilotConfig& cfg, double snr_db,
                                    double ref_power, Rng& rng);

/// Raw-unit channel estimate for one observation vector (length 2*Np).
ComplexVec estimate_channel(const EstimatorNet& net, const std::vector<double>& observation);

/// Adam training on (observation -> channel) pairs. Each epoch walks the
/// training set in a fresh shuffled order, regenerates every observation
/// with fresh noise at an SNR drawn uniformly from the grid, and steps on
/// minibatches under the mean squared channel error. The net's ref_power
/// is the training set's mean raw power.
EstimatorNet train_estimator(const WirelessDataset& train_set, const PilotConfig& cfg, int epochs,
                             Rng& rng, const EstimatorHyper& hyper = {});

struct MsePoint {
    double snr_db = 0.0;
    double nmse = 0.0;
};

struct EvalResult {
    std::vector<MsePoint> points;
    std::size_t excluded = 0;  // zero-norm test channels left out of the mean
};

/// NMSE = mean ||h_hat - h||^2 / ||h||^2 over the test set, one point per
/// SNR in cfg's grid, fresh noise per sample. Evaluation noise is scaled
/// by the test set's own mean power, so every net faces the same physical
/// observations; each net then normalizes inputs by its stored ref_power.
EvalResult eval_mse(const EstimatorNet& net, const WirelessDataset& test_set,
                    const PilotConfig& cfg, Rng& rng);

/// Checkpoint I/O keyed by a digest of the MlpSpec and pilot setup, so a
/// checkpoint cannot silently load into a mismatched observation model.
/// The body stores the parameters with ref_power appended as the final
/// entry, making the saved net self-contained.
void save_estimator(const EstimatorNet& net, const std::string& path);
EstimatorNet load_estimator(const std::string& path, const PilotConfig& cfg,
                            const EstimatorHyper& hyper);

}  // namespace wdc
