#ifndef SENTINEL_AES_CTR_HPP
#define SENTINEL_AES_CTR_HPP

#include <array>
#include <span>

#include "sentinel/common.hpp"

namespace sentinel::adv {

// AES-256 counter mode keystream, addressable at arbitrary byte offsets so
// masked ranges can be encrypted in place. XOR-ing twice at the same offset
// restores the plaintext.
struct CipherConfig {
    std::array<std::uint8_t, 32> key{};
    std::array<std::uint8_t, 16> nonce{};

    // key/nonce derived from (seed, id) via SHA-256 so corpora reproduce
    static CipherConfig derive(std::uint64_t seed, const std::string& id);
};

// XORs data[i] with keystream byte at absolute position stream_offset + i.
void ctr_xor(const CipherConfig& cfg, std::span<std::uint8_t> data, std::uint64_t stream_offset);

// Convenience: full-buffer encryption starting at stream offset 0.
Bytes ctr_encrypt(const CipherConfig& cfg, const Bytes& plaintext);

} // namespace sentinel::adv

#endif
