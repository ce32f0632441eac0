#pragma once

#include "lpplab/common.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace lpplab {

// Counter-based random environment.  Every scalar is a pure function of
// (master_seed, replica_id, stream tag, counters), so replicas can run on
// any thread in any order and reproduce bit-identical fields.
//
// Derivation contract (fixed; see docs/randomness.md):
//   h0 = mix(master_seed ^ GAMMA)
//   h1 = mix(h0 ^ replica_id)
//   h2 = mix(h1 ^ tag_hash)          tag_hash = FNV-1a 64 of the tag bytes
//   w  = mix(mix(h2 ^ zig(a)) ^ zig(b))
//   U  = (w >> 11) * 2^-53           53-bit uniform in [0, 1)
// mix is the 64-bit murmur3 finalizer, zig is zig-zag encoding of a signed
// 64-bit integer, GAMMA = 0x9e3779b97f4a7c15.
//
// Vertex weights use tag "weights" with (a, b) = (x, y) and are
// omega = -ln(1-U) rounded to the nearest multiple of 2^-34 (exact-sum
// grid; see common.hpp).  U = 0 yields omega = 0; that and the rounding of
// tiny values to zero are ~2^-35-probability events we accept.
struct Env {
    std::uint64_t master_seed = 0;
    std::uint64_t replica_id = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

inline std::uint64_t zig(long long v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

inline std::uint64_t fnv1a(const char* s, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(s[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

} // namespace detail

// Hash of a stream tag; constant per stream, computed once per stream use.
inline std::uint64_t tag_hash(const std::string& tag) {
    return detail::fnv1a(tag.data(), tag.size());
}

inline std::uint64_t stream_base(const Env& env, std::uint64_t tag_h) {
    std::uint64_t h = detail::mix64(env.master_seed ^ detail::kGamma);
    h = detail::mix64(h ^ env.replica_id);
    return detail::mix64(h ^ tag_h);
}

inline std::uint64_t word_at(std::uint64_t base, long long a, long long b) {
    return detail::mix64(detail::mix64(base ^ detail::zig(a)) ^ detail::zig(b));
}

inline double uniform_from_word(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1p-53;
}

// Round to the exact-sum weight grid (nearest multiple of 2^-34).
inline double quantize(double v) {
    return static_cast<double>(std::llround(v * kInvWeightQuantum)) * kWeightQuantum;
}

inline const std::uint64_t kWeightsTag = tag_hash("weights");

// Exp(1) vertex weight at p, on the exact-sum grid.
inline double weight_at(const Env& env, const Point& p) {
    std::uint64_t w = word_at(stream_base(env, kWeightsTag), p.x, p.y);
    return quantize(-std::log1p(-uniform_from_word(w)));
}

// Cached per-(env, stream) state for bulk generation: one sweep draws many
// weights, so hoist the two outer mixing stages.
struct WeightStream {
    std::uint64_t base;
    explicit WeightStream(const Env& env) : base(stream_base(env, kWeightsTag)) {}
    double operator()(long long x, long long y) const {
        return quantize(-std::log1p(-uniform_from_word(word_at(base, x, y))));
    }
};

// Auxiliary uniform stream.  The tag "weights" is reserved for the field;
// any other tag yields a stream disjoint from it by construction.
inline double uniform_at(const Env& env, const std::string& tag, long long index) {
    std::uint64_t th = tag_hash(tag);
    if (th == kWeightsTag) throw Error("stream tag collides with reserved weight stream");
    return uniform_from_word(word_at(stream_base(env, th), index, 0));
}

struct UniformStream {
    std::uint64_t base;
    UniformStream(const Env& env, const std::string& tag) : base(0) {
        std::uint64_t th = tag_hash(tag);
        if (th == kWeightsTag) throw Error("stream tag collides with reserved weight stream");
        base = stream_base(env, th);
    }
    double operator()(long long index) const {
        return uniform_from_word(word_at(base, index, 0));
    }
    // Exp(rate 1/2) draw (mean 2) on the weight grid.
    double exp_half(long long index) const {
        return quantize(-2.0 * std::log1p(-(*this)(index)));
    }
};

} // namespace lpplab
