#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace pphi {

/// Philox 2x64-10 keyed counter block cipher (Salmon et al. construction).
/// One block maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<uint64_t, 2> philox2x64(uint64_t ctr0, uint64_t ctr1, uint64_t key);

/// Label for seed derivation: either a string or an integer, encoded with a
/// type tag and length so distinct label lists never collide byte-wise.
struct SeedLabel {
    enum class Kind { Str, Int } kind;
    std::string str;
    uint64_t num = 0;

    SeedLabel(const char* s) : kind(Kind::Str), str(s) {}
    SeedLabel(std::string_view s) : kind(Kind::Str), str(s) {}
    SeedLabel(const std::string& s) : kind(Kind::Str), str(s) {}
    SeedLabel(uint64_t v) : kind(Kind::Int), num(v) {}
    SeedLabel(int v) : kind(Kind::Int), num(static_cast<uint64_t>(static_cast<int64_t>(v))) {}
};

/// Deterministic, order-sensitive derivation of a substream seed from a
/// master seed and a list of labels. Stable across platforms and versions:
/// FNV-1a over the canonical label encoding, finalized with splitmix64.
uint64_t derive_seed(uint64_t master, std::initializer_list<SeedLabel> labels);
uint64_t derive_seed(uint64_t master, const std::vector<SeedLabel>& labels);

/// Counter-based random stream: the key identifies the stream, the counter
/// advances with consumption. Streams with distinct keys are independent;
/// output depends only on (key, number of values drawn so far).
class CounterRng {
  public:
    explicit CounterRng(uint64_t key) : key_(key) {}

    uint64_t next_u64();
    /// Uniform on [0, 1) with 53-bit resolution.
    double next_uniform();
    /// Standard normal via Box-Muller (pairs of uniforms; spare cached).
    double next_gaussian();

  private:
    uint64_t key_;
    uint64_t ctr_ = 0;
    std::array<uint64_t, 2> block_{};
    int avail_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace pphi
