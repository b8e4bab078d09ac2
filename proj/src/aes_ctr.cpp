#include "sentinel/aes_ctr.hpp"

#include <cstring>

#include <openssl/evp.h>
#include <openssl/sha.h>

namespace sentinel::adv {

CipherConfig CipherConfig::derive(std::uint64_t seed, const std::string& id) {
    CipherConfig cfg;
    std::array<std::uint8_t, 8> seed_bytes;
    for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));

    std::array<std::uint8_t, SHA256_DIGEST_LENGTH> digest;
    auto hash = [&](const char* domain) {
        SHA256_CTX ctx;
        SHA256_Init(&ctx);
        SHA256_Update(&ctx, domain, std::strlen(domain));
        SHA256_Update(&ctx, seed_bytes.data(), seed_bytes.size());
        SHA256_Update(&ctx, id.data(), id.size());
        SHA256_Final(digest.data(), &ctx);
    };
    hash("sentinel-key");
    std::memcpy(cfg.key.data(), digest.data(), 32);
    hash("sentinel-nonce");
    std::memcpy(cfg.nonce.data(), digest.data(), 16);
    return cfg;
}

namespace {

// IV for CTR block `block`: nonce treated as a 128-bit big-endian counter base
std::array<std::uint8_t, 16> iv_at_block(const CipherConfig& cfg, std::uint64_t block) {
    std::array<std::uint8_t, 16> iv = cfg.nonce;
    std::uint64_t carry = block;
    for (int i = 15; i >= 0 && carry; --i) {
        std::uint64_t v = iv[i] + (carry & 0xff);
        iv[i] = static_cast<std::uint8_t>(v);
        carry = (carry >> 8) + (v >> 8);
    }
    return iv;
}

struct EvpCtx {
    EVP_CIPHER_CTX* ctx;
    EvpCtx() : ctx(EVP_CIPHER_CTX_new()) {
        if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    }
    ~EvpCtx() { EVP_CIPHER_CTX_free(ctx); }
};

} // namespace

void ctr_xor(const CipherConfig& cfg, std::span<std::uint8_t> data, std::uint64_t stream_offset) {
    if (data.empty()) return;
    EvpCtx e;
    auto iv = iv_at_block(cfg, stream_offset / 16);
    if (EVP_EncryptInit_ex(e.ctx, EVP_aes_256_ctr(), nullptr, cfg.key.data(), iv.data()) != 1)
        throw std::runtime_error("EVP_EncryptInit_ex failed");

    std::size_t skip = stream_offset % 16;
    int outl = 0;
    if (skip) {
        std::array<std::uint8_t, 16> zeros{}, scratch{};
        if (EVP_EncryptUpdate(e.ctx, scratch.data(), &outl, zeros.data(),
                              static_cast<int>(skip)) != 1)
            throw std::runtime_error("EVP_EncryptUpdate failed");
    }
    // CTR is a stream XOR: encrypting the data directly applies the keystream
    constexpr std::size_t kChunk = 1 << 20;
    for (std::size_t pos = 0; pos < data.size(); pos += kChunk) {
        std::size_t n = std::min(kChunk, data.size() - pos);
        if (EVP_EncryptUpdate(e.ctx, data.data() + pos, &outl, data.data() + pos,
                              static_cast<int>(n)) != 1)
            throw std::runtime_error("EVP_EncryptUpdate failed");
    }
}

Bytes ctr_encrypt(const CipherConfig& cfg, const Bytes& plaintext) {
    Bytes out = plaintext;
    ctr_xor(cfg, out, 0);
    return out;
}

} // namespace sentinel::adv
