#ifndef SENTINEL_ADVERSARY_HPP
#define SENTINEL_ADVERSARY_HPP

#include <variant>

#include "sentinel/aes_ctr.hpp"
#include "sentinel/base64.hpp"
#include "sentinel/common.hpp"
#include "sentinel/corpus.hpp"

namespace sentinel::adv {

constexpr std::uint64_t kMB = 1ULL << 20;

// --- encryption/encoding recipes -------------------------------------------

struct FullCipher {};
struct SkipStep {
    std::uint64_t skip_mb; // N: skipped run
    std::uint64_t enc_mb;  // Y: encrypted run
};
struct Fast {
    std::uint64_t head_mb; // N: encrypted prefix
};
struct Percent {
    std::uint64_t enc_mb; // N
    double percent;       // P in [0,100]
};
struct Alternate16 {};
struct SmartPattern {
    std::uint64_t chunk_mb; // N
    double percent_step;    // P in (0,100]
};
struct BlackBasta {};
struct ParadiseTiered {};
struct CipherThenBase64 {};
struct NullDilution {
    double ratio; // nulls inserted per ciphertext byte, in (0,1)
};

using AdversaryMode =
    std::variant<FullCipher, SkipStep, Fast, Percent, Alternate16, SmartPattern, BlackBasta,
                 ParadiseTiered, CipherThenBase64, NullDilution>;

// canonical CLI spelling, e.g. "skipstep:1,2"; also used as provenance tag
std::string mode_name(const AdversaryMode& mode);
// parses the CLI spelling; throws ConfigError on bad input
AdversaryMode parse_mode(const std::string& text);
// throws ConfigError when per-variant parameter invariants are violated
void validate_mode(const AdversaryMode& mode);

// --- byte-range masks -------------------------------------------------------

struct ByteRange {
    std::uint64_t offset;
    std::uint64_t length;
};

struct EncryptionMask {
    std::uint64_t total_len = 0;
    std::vector<ByteRange> ranges; // disjoint, sorted, in-bounds

    std::uint64_t encrypted_bytes() const;
    bool contains(std::uint64_t byte) const;
};

EncryptionMask build_mask(const AdversaryMode& mode, std::uint64_t total_len);

// sum of range lengths / total_len; 0 for an empty file
double encrypted_fraction(const EncryptionMask& mask);

// --- application ------------------------------------------------------------

// Returns a new sample with label=Encrypted and provenance recording the
// mode. Masked ranges are XOR-ed with the CTR keystream at their absolute
// file offsets; unmasked bytes are untouched.
corpus::FileSample apply_mode(const corpus::FileSample& sample, const AdversaryMode& mode,
                              const CipherConfig& cipher);

} // namespace sentinel::adv

#endif
