#ifndef SENTINEL_COMMON_HPP
#define SENTINEL_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sentinel {

using Bytes = std::vector<std::uint8_t>;

// exit code 2 territory: bad flags, bad config files, invalid parameters
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// misuse of an API contract (e.g. double encryption)
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Counter-based splitmix64. All corpus/adversary randomness flows through
// this so runs are reproducible independent of the standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0
    std::uint64_t uniform(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    std::uint8_t next_byte() { return static_cast<std::uint8_t>(next_u64() & 0xff); }

    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    // child generator with a decorrelated seed, for per-sample determinism
    Rng fork(std::uint64_t salt) {
        std::uint64_t s = state_ ^ (salt * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
        Rng child(s);
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    Rng r(seed * 0x9e3779b97f4a7c15ULL ^ stream);
    r.next_u64();
    return r.fork(index);
}

} // namespace sentinel

#endif
