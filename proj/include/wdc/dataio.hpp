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
#include <span>
#include <string>
#include <utility>

#include "wdc/dataset.hpp"
#include "wdc/mlp.hpp"

namespace wdc {

// Dataset file layout (all integers little-endian):
//   magic "WDC1", version u16, nt u32, sample_count u64, condition_index u32,
//   scale f64, metadata_length u32, metadata (UTF-8 JSON),
//   body: sample-major interleaved (Re, Im) f64.
//
// Checkpoint file layout:
//   magic "WCK1", version u16, spec digest u64, param count u64, body f64[].
//
// Writes go to a temp file in the same directory and are renamed into
// place, so a failed write never leaves a partial file behind.

inline constexpr char kDatasetMagic[4] = {'W', 'D', 'C', '1'};
inline constexpr std::uint16_t kDatasetVersion = 1;
inline constexpr char kCheckpointMagic[4] = {'W', 'C', 'K', '1'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

void save_dataset(const WirelessDataset& ds, const std::string& path);
WirelessDataset load_dataset(const std::string& path);

/// Each CSV row holds 2*nt finite numeric fields, (Re, Im) interleaved.
/// Provenance is marked "imported". Throws ParseError with the 1-based
/// line number on malformed rows.
WirelessDataset import_csv(const std::string& path, int nt, int condition_index);

/// Inverse of import_csv; values printed with enough digits to round-trip
/// f64 exactly.
void export_csv(const WirelessDataset& ds, const std::string& path);

void save_checkpoint(std::uint64_t spec_digest, const ParamVector& params,
                                          const std::string& path);

/// Raw read: (stored digest, params).
std::pair<std::uint64_t, ParamVector> read_checkpoint(const std::string& path);

/// Read and verify: throws CompatibilityError when the stored digest does
/// not match `expected_digest`.
ParamVector load_checkpoint(const std::string& path, std::uint64_t expected_digest);

/// FNV-1a 64-bit hash. Stable across platforms; used for spec digests,
/// provenance tags, and manifest output digests.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& s);
std::uint64_t fnv1a64(std::span<const double> values);

/// Hex form ("0123456789abcdef") used wherever digests appear in text.
std::string digest_hex(std::uint64_t digest);

std::uint64_t file_digest(const std::string& path);

/// Serialize-then-rename helper shared by every writer in this module.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace wdc
