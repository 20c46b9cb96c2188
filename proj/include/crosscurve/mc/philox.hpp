#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace xc {

// Philox-4x32-10 counter-based generator. Stateless: every 128-bit counter /
// 64-bit key pair maps to four independent 32-bit words, so path and step
// indices address draws directly and path-count changes never shuffle
// existing paths.
struct Philox4x32 {
    static constexpr std::uint32_t kMult0 = 0xD2511F53u;
    static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> generate(std::array<std::uint32_t, 4> ctr,
                                                 std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// Normal draws addressed by (path, step, index). Each Philox block yields two
// Box-Muller normals; higher indices advance the block counter.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : seed_(seed) {}

    double normal(std::uint64_t path, std::uint64_t step, std::uint32_t index) const {
        const std::uint32_t block = index >> 1;
        const auto words = Philox4x32::generate(
            {block, static_cast<std::uint32_t>(step),
             static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        const double u1 = to_open_unit(words[0], words[1]);
        const double u2 = to_open_unit(words[2], words[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        return (index & 1u) == 0 ? r * std::cos(a) : r * std::sin(a);
    }

    // Fills z[0..n) with the draws indexed 0..n-1 of (path, step), reusing
    // each block for its pair.
    void fill(std::uint64_t path, std::uint64_t step, std::uint32_t n, double* z) const {
        for (std::uint32_t block = 0; 2 * block < n; ++block) {
            const auto words = Philox4x32::generate(
                {block, static_cast<std::uint32_t>(step),
                 static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)},
                {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
            const double u1 = to_open_unit(words[0], words[1]);
            const double u2 = to_open_unit(words[2], words[3]);
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 2.0 * 3.14159265358979323846 * u2;
            z[2 * block] = r * std::cos(a);
            if (2 * block + 1 < n) z[2 * block + 1] = r * std::sin(a);
        }
    }

    std::uint64_t seed() const { return seed_; }

  private:
    // 53-bit uniform strictly inside (0, 1).
    static double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t u = (static_cast<std::uint64_t>(hi) << 32) | lo;
        return (static_cast<double>(u >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    std::uint64_t seed_;
};

}  // namespace xc
