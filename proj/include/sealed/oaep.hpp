// Copyright 2026 The Sealed State Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OAEP-style sealing over a simulated human-invertible one-way function.
//
// f is a keyed bijection from k-bit strings to opaque image tokens. Only a
// HumanOracle can run it backwards, and every inversion is appended to the
// oracle's query log Q. Encoding follows
//     E_r(y) = f( (y ^ G(r)) || (r ^ H(y ^ G(r))) )
// with the n-bit half in the high bits.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sealed/protocols.hpp"

namespace sealed {

inline constexpr int kMaxOaepK0 = 16;
inline constexpr int kMaxOaepK = 62;

/// Throws config_invalid unless n = k - k0 and 1 <= k0 <= kMaxOaepK0,
/// n >= 1, k <= kMaxOaepK.
void validate(const OaepParams &params);

std::uint64_t bit_mask(int width);

/// First `out_bits` bits of SHA-256(key || 0x00 || tag || param || x as
/// big-endian u64), read big-endian. out_bits <= 64.
std::uint64_t keyed_hash_bits(const std::string &key, char tag, std::uint8_t param, std::uint64_t x, int out_bits);

/// Forward half of f. Holds the key but exposes no inversion.
class CaptchaFunction {
  public:
    CaptchaFunction(std::string key, int k);

    Label forward(std::uint64_t x) const;
    std::uint64_t forward_value(std::uint64_t x) const;
    int width() const { return k_; }
    const std::string &key_id() const { return key_; }

  private:
    std::string key_;
    int k_;
};

Label image_token(std::uint64_t value, int k);
/// Throws parse_error for anything image_token could not have produced.
std::uint64_t parse_image_token(const Label &token, int k);

/// The simulated human: inverts f perfectly and logs every query.
/// invert() is serialized; query_log() returns a snapshot.
class HumanOracle {
  public:
    HumanOracle(std::string key, int k);

    std::uint64_t invert(const Label &token);
    std::vector<Label> query_log() const;
    std::size_t query_count() const;

  private:
    std::string key_;
    int k_;
    mutable std::mutex mutex_;
    std::vector<Label> log_;
};

class OaepContext {
  public:
    /// Forward-only unless `with_human` is set.
    OaepContext(OaepParams params, OaepKeyIds keys, bool with_human);

    static OaepContext reference(OaepParams params = {}, bool with_human = true);

    const OaepParams &params() const { return params_; }
    const OaepKeyIds &keys() const { return keys_; }
    const CaptchaFunction &f() const { return f_; }
    bool has_human() const { return human_ != nullptr; }
    /// Throws oracle_unavailable for a forward-only context.
    HumanOracle &human() const;

    std::uint64_t G(std::uint64_t r) const;
    std::uint64_t H(std::uint64_t s) const;

  private:
    OaepParams params_;
    OaepKeyIds keys_;
    CaptchaFunction f_;
    std::shared_ptr<HumanOracle> human_;
};

/// s || t, the k-bit input handed to f.
std::uint64_t oaep_pad(std::uint64_t y, std::uint64_t r, const OaepContext &ctx);
Label encode(std::uint64_t y, std::uint64_t r, const OaepContext &ctx);

struct OaepPreimage {
    std::uint64_t y;
    std::uint64_t r;
};
/// Inverse of oaep_pad given the f preimage.
OaepPreimage oaep_unpad(std::uint64_t x, const OaepContext &ctx);

/// B label for r: k0-character binary string.
Label r_label(std::uint64_t r, int k0);
std::uint64_t parse_r_label(const Label &label, int k0);

SealedInstance seal_oaep(std::uint64_t y, const OaepContext &ctx);

struct OaepUnsealResult {
    std::uint64_t y;
    std::uint64_t r;
    Label measured_b;  // B label of the collapsed branch
    Label token;       // the image shown to the human
};

/// Measures C, asks the human once, strips the padding.
OaepUnsealResult unseal_oaep(const SealedInstance &inst, const OaepContext &ctx, std::uint64_t rng_seed);

using RSet = std::set<std::uint64_t>;

/// R = { r : E_r(y) in Q }.
RSet r_set(const std::vector<Label> &queries, std::uint64_t y, const OaepContext &ctx);

struct Overlap {
    double value;
    bool degenerate_u;  // R covers every r; U is undefined
};

/// |<t|u>|^2 where t is the reference and u the uniform superposition of the
/// reference's branches with r outside R.
Overlap tu_overlap(const SealedInstance &inst, const RSet &r);

/// 1 - tu_overlap: the mass by which Belinda's T test can disagree with the
/// (unmeasurable) U test.
double useless_query_bound(const SealedInstance &inst, const RSet &r);

/// Charlie unseals for real and hands back the collapsed classical branch
/// |r>|E_r(y)>.
struct BranchReturn {
    OaepUnsealResult unsealed;
    SparseState returned;
    double accept_probability;
    RSet useful_r;
};
BranchReturn unseal_and_return_branch(const SealedInstance &inst, const OaepContext &ctx, std::uint64_t rng_seed);

struct GoldenVector {
    std::uint64_t y;
    std::uint64_t r;
    std::uint64_t token;

    bool operator==(const GoldenVector &) const = default;
};

/// Lines of "y_hex r_hex token_hex", zero-padded to ceil(bits / 4) digits.
std::string format_golden(const std::vector<GoldenVector> &rows, const OaepParams &params);
std::vector<GoldenVector> parse_golden(const std::string &text);
std::vector<GoldenVector> read_golden(const std::filesystem::path &path);

std::string to_hex(std::uint64_t value, int bits);

}  // namespace sealed
