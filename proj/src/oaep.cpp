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

#include "sealed/oaep.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sealed/error.hpp"

namespace sealed {

namespace {

constexpr int kFeistelRounds = 8;
constexpr char kTokenPrefix[] = "img:";

int feistel_width(int k) { return k + (k % 2); }

// Explicit fetch once; the implicit one in EVP_sha256() is per call.
const EVP_MD *sha256() {
    static const std::unique_ptr<EVP_MD, decltype(&EVP_MD_free)> md(EVP_MD_fetch(nullptr, "SHA256", nullptr),
                                                                     &EVP_MD_free);
    if (!md) throw Error(ErrorCode::invalid_state, "SHA-256 unavailable");
    return md.get();
}

std::uint64_t feistel_round(const std::string &key, int round, std::uint64_t half_value, int half_bits) {
    return keyed_hash_bits(key, 'F', static_cast<std::uint8_t>(round), half_value, half_bits);
}

std::uint64_t feistel_forward(const std::string &key, int width, std::uint64_t x) {
    const int half = width / 2;
    const std::uint64_t mask = bit_mask(half);
    std::uint64_t left = x >> half;
    std::uint64_t right = x & mask;
    for (int round = 0; round < kFeistelRounds; ++round) {
        const std::uint64_t next = left ^ feistel_round(key, round, right, half);
        left = right;
        right = next;
    }
    return (left << half) | right;
}

std::uint64_t feistel_inverse(const std::string &key, int width, std::uint64_t x) {
    const int half = width / 2;
    const std::uint64_t mask = bit_mask(half);
    std::uint64_t left = x >> half;
    std::uint64_t right = x & mask;
    for (int round = kFeistelRounds - 1; round >= 0; --round) {
        const std::uint64_t previous = right ^ feistel_round(key, round, left, half);
        right = left;
        left = previous;
    }
    return (left << half) | right;
}

}  // namespace

std::uint64_t bit_mask(int width) { return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1; }

void validate(const OaepParams &params) {
    if (params.k0 < 1 || params.n < 1 || params.k > kMaxOaepK || params.n != params.k - params.k0)
        throw Error(ErrorCode::config_invalid, "OAEP parameters need 1 <= k0, 1 <= n = k - k0, k <= " +
                                                   std::to_string(kMaxOaepK));
    if (params.k0 > kMaxOaepK0)
        throw Error(ErrorCode::dimension_too_large,
                    "k0 = " + std::to_string(params.k0) + " exceeds the support cap 2^" + std::to_string(kMaxOaepK0));
}

std::uint64_t keyed_hash_bits(const std::string &key, char tag, std::uint8_t param, std::uint64_t x, int out_bits) {
    std::string buffer = key;
    buffer.push_back('\0');
    buffer.push_back(tag);
    buffer.push_back(static_cast<char>(param));
    for (int shift = 56; shift >= 0; shift -= 8) buffer.push_back(static_cast<char>((x >> shift) & 0xff));

    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(buffer.data(), buffer.size(), digest.data(), &length, sha256(), nullptr) != 1)
        throw Error(ErrorCode::invalid_state, "SHA-256 evaluation failed");

    std::uint64_t head = 0;
    for (int i = 0; i < 8; ++i) head = (head << 8) | digest[static_cast<std::size_t>(i)];
    return out_bits >= 64 ? head : head >> (64 - out_bits);
}

std::string to_hex(std::uint64_t value, int bits) {
    static constexpr char digits[] = "0123456789abcdef";
    const int width = (bits + 3) / 4;
    std::string out(static_cast<std::size_t>(width), '0');
    for (int i = width - 1; i >= 0; --i, value >>= 4) out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    return out;
}

namespace {

std::uint64_t parse_hex(const std::string &text) {
    if (text.empty() || text.size() > 16) throw Error(ErrorCode::parse_error, "bad hex '" + text + "'");
    std::uint64_t value = 0;
    for (char ch : text) {
        int digit;
        if (ch >= '0' && ch <= '9') digit = ch - '0';
        else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') digit = ch - 'A' + 10;
        else throw Error(ErrorCode::parse_error, "bad hex '" + text + "'");
        value = (value << 4) | static_cast<std::uint64_t>(digit);
    }
    return value;
}

}  // namespace

Label image_token(std::uint64_t value, int k) { return Label(kTokenPrefix + to_hex(value, k)); }

std::uint64_t parse_image_token(const Label &token, int k) {
    const std::string &text = token.str();
    const std::string prefix = kTokenPrefix;
    if (text.rfind(prefix, 0) != 0 || text.size() != prefix.size() + static_cast<std::size_t>((k + 3) / 4))
        throw Error(ErrorCode::parse_error, "'" + text + "' is not an image token");
    const std::uint64_t value = parse_hex(text.substr(prefix.size()));
    if (value > bit_mask(k)) throw Error(ErrorCode::parse_error, "'" + text + "' is out of range");
    return value;
}

CaptchaFunction::CaptchaFunction(std::string key, int k) : key_(std::move(key)), k_(k) {}

std::uint64_t CaptchaFunction::forward_value(std::uint64_t x) const {
    if (x > bit_mask(k_)) throw Error(ErrorCode::length_mismatch, "f input wider than k bits");
    const int width = feistel_width(k_);
    std::uint64_t v = x;
    do {
        v = feistel_forward(key_, width, v);
    } while (v > bit_mask(k_));
    return v;
}

Label CaptchaFunction::forward(std::uint64_t x) const { return image_token(forward_value(x), k_); }

HumanOracle::HumanOracle(std::string key, int k) : key_(std::move(key)), k_(k) {}

std::uint64_t HumanOracle::invert(const Label &token) {
    std::lock_guard lock(mutex_);
    log_.push_back(token);
    const int width = feistel_width(k_);
    std::uint64_t v = parse_image_token(token, k_);
    do {
        v = feistel_inverse(key_, width, v);
    } while (v > bit_mask(k_));
    return v;
}

std::vector<Label> HumanOracle::query_log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::size_t HumanOracle::query_count() const {
    std::lock_guard lock(mutex_);
    return log_.size();
}

OaepContext::OaepContext(OaepParams params, OaepKeyIds keys, bool with_human)
    : params_(params), keys_(std::move(keys)), f_(keys_.f_key, params.k) {
    validate(params_);
    if (with_human) human_ = std::make_shared<HumanOracle>(keys_.f_key, params_.k);
}

OaepContext OaepContext::reference(OaepParams params, bool with_human) { return {params, OaepKeyIds{}, with_human}; }

HumanOracle &OaepContext::human() const {
    if (!human_) throw Error(ErrorCode::oracle_unavailable, "context was built without human access");
    return *human_;
}

std::uint64_t OaepContext::G(std::uint64_t r) const {
    return keyed_hash_bits(keys_.g_key, 'G', static_cast<std::uint8_t>(params_.k0), r, params_.n);
}

std::uint64_t OaepContext::H(std::uint64_t s) const {
    return keyed_hash_bits(keys_.h_key, 'H', static_cast<std::uint8_t>(params_.n), s, params_.k0);
}

std::uint64_t oaep_pad(std::uint64_t y, std::uint64_t r, const OaepContext &ctx) {
    const auto &p = ctx.params();
    if (y > bit_mask(p.n) || r > bit_mask(p.k0))
        throw Error(ErrorCode::length_mismatch, "y must fit n bits and r must fit k0 bits");
    const std::uint64_t s = y ^ ctx.G(r);
    const std::uint64_t t = r ^ ctx.H(s);
    return (s << p.k0) | t;
}

Label encode(std::uint64_t y, std::uint64_t r, const OaepContext &ctx) { return ctx.f().forward(oaep_pad(y, r, ctx)); }

OaepPreimage oaep_unpad(std::uint64_t x, const OaepContext &ctx) {
    const auto &p = ctx.params();
    const std::uint64_t s = x >> p.k0;
    const std::uint64_t t = x & bit_mask(p.k0);
    const std::uint64_t r = t ^ ctx.H(s);
    return OaepPreimage{s ^ ctx.G(r), r};
}

Label r_label(std::uint64_t r, int k0) {
    std::string bits(static_cast<std::size_t>(k0), '0');
    for (int i = k0 - 1; i >= 0; --i, r >>= 1) bits[static_cast<std::size_t>(i)] = (r & 1) ? '1' : '0';
    return Label(bits);
}

std::uint64_t parse_r_label(const Label &label, int k0) {
    const std::string &bits = label.str();
    if (bits.size() != static_cast<std::size_t>(k0)) throw Error(ErrorCode::parse_error, "bad r label '" + bits + "'");
    std::uint64_t r = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') throw Error(ErrorCode::parse_error, "bad r label '" + bits + "'");
        r = (r << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return r;
}

SealedInstance seal_oaep(std::uint64_t y, const OaepContext &ctx) {
    const auto &p = ctx.params();
    validate(p);
    const std::uint64_t branches = std::uint64_t{1} << p.k0;
    const double amp = 1.0 / std::sqrt(static_cast<double>(branches));

    SparseState::AmplitudeMap amps;
    std::map<Label, std::optional<Message>> decode;
    for (std::uint64_t r = 0; r < branches; ++r) {
        Label token = encode(y, r, ctx);
        decode.emplace(token, std::nullopt);
        amps.emplace(LabelPair{r_label(r, p.k0), std::move(token)}, amp);
    }
    auto reference = SparseState::from_amplitudes(std::move(amps));
    const auto labels = reference.c_labels();
    UnsealSpec unseal{LocalUnitary::identity({labels.begin(), labels.end()}), ProjPartition::finest(labels),
                      std::move(decode)};
    return SealedInstance{Protocol::oaep, OaepSealParams{p, ctx.keys(), y}, std::move(reference), std::move(unseal)};
}

namespace {

const OaepSealParams &oaep_params_of(const SealedInstance &inst) {
    if (inst.protocol != Protocol::oaep) throw Error(ErrorCode::config_invalid, "not an OAEP instance");
    return std::get<OaepSealParams>(inst.params);
}

}  // namespace

OaepUnsealResult unseal_oaep(const SealedInstance &inst, const OaepContext &ctx, std::uint64_t rng_seed) {
    const auto &sealed_params = oaep_params_of(inst);
    if (sealed_params.params != ctx.params()) throw Error(ErrorCode::length_mismatch, "context parameters differ");
    HumanOracle &human = ctx.human();

    const auto measured = measure_partition(inst.reference, inst.unseal.partition, rng_seed);
    const Label &measured_b = measured.post.amplitudes().begin()->first.first;
    const auto preimage = oaep_unpad(human.invert(measured.outcome), ctx);
    return OaepUnsealResult{preimage.y, preimage.r, measured_b, measured.outcome};
}

RSet r_set(const std::vector<Label> &queries, std::uint64_t y, const OaepContext &ctx) {
    const std::set<Label> asked(queries.begin(), queries.end());
    RSet out;
    const std::uint64_t branches = std::uint64_t{1} << ctx.params().k0;
    for (std::uint64_t r = 0; r < branches; ++r)
        if (asked.contains(encode(y, r, ctx))) out.insert(r);
    return out;
}

Overlap tu_overlap(const SealedInstance &inst, const RSet &r) {
    const int k0 = oaep_params_of(inst).params.k0;
    SparseState::AmplitudeMap useless;
    for (const auto &[key, amp] : inst.reference.amplitudes())
        if (!r.contains(parse_r_label(key.first, k0))) useless.emplace(key, amp);
    if (useless.empty()) return Overlap{0.0, true};
    const auto u = SparseState::normalized(std::move(useless));
    return Overlap{std::norm(inner_product(inst.reference, u)), false};
}

double useless_query_bound(const SealedInstance &inst, const RSet &r) { return 1.0 - tu_overlap(inst, r).value; }

BranchReturn unseal_and_return_branch(const SealedInstance &inst, const OaepContext &ctx, std::uint64_t rng_seed) {
    auto unsealed = unseal_oaep(inst, ctx, rng_seed);
    auto returned = SparseState::basis(unsealed.measured_b, unsealed.token);
    const double accept = project_accept_probability(inst.reference, Ensemble::pure(returned));
    auto useful = r_set(ctx.human().query_log(), oaep_params_of(inst).y, ctx);
    return BranchReturn{std::move(unsealed), std::move(returned), accept, std::move(useful)};
}

std::string format_golden(const std::vector<GoldenVector> &rows, const OaepParams &params) {
    std::ostringstream out;
    for (const auto &row : rows)
        out << to_hex(row.y, params.n) << ' ' << to_hex(row.r, params.k0) << ' ' << to_hex(row.token, params.k)
            << '\n';
    return out.str();
}

std::vector<GoldenVector> parse_golden(const std::string &text) {
    std::vector<GoldenVector> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string y, r, token, extra;
        if (!(fields >> y >> r >> token) || (fields >> extra))
            throw Error(ErrorCode::parse_error, "golden line '" + line + "' needs three hex fields");
        rows.push_back({parse_hex(y), parse_hex(r), parse_hex(token)});
    }
    return rows;
}

std::vector<GoldenVector> read_golden(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_golden(text.str());
}

}  // namespace sealed
