#include "sentinel/base64.hpp"

#include <array>

namespace sentinel::adv {

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::array<int, 256> make_reverse() {
    std::array<int, 256> rev{};
    rev.fill(-1);
    for (int i = 0; i < 64; ++i) rev[static_cast<unsigned char>(kAlphabet[i])] = i;
    return rev;
}
const std::array<int, 256> kReverse = make_reverse();
} // namespace

Bytes base64_encode(const Bytes& input) {
    Bytes out;
    out.reserve(4 * ((input.size() + 2) / 3));
    std::size_t i = 0;
    for (; i + 3 <= input.size(); i += 3) {
        std::uint32_t b = (input[i] << 16) | (input[i + 1] << 8) | input[i + 2];
        out.push_back(kAlphabet[(b >> 18) & 63]);
        out.push_back(kAlphabet[(b >> 12) & 63]);
        out.push_back(kAlphabet[(b >> 6) & 63]);
        out.push_back(kAlphabet[b & 63]);
    }
    std::size_t rem = input.size() - i;
    if (rem == 1) {
        std::uint32_t b = input[i] << 16;
        out.push_back(kAlphabet[(b >> 18) & 63]);
        out.push_back(kAlphabet[(b >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rem == 2) {
        std::uint32_t b = (input[i] << 16) | (input[i + 1] << 8);
        out.push_back(kAlphabet[(b >> 18) & 63]);
        out.push_back(kAlphabet[(b >> 12) & 63]);
        out.push_back(kAlphabet[(b >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

Bytes base64_decode(const Bytes& input) {
    if (input.size() % 4 != 0) throw UsageError("base64_decode: length not a multiple of 4");
    Bytes out;
    out.reserve(input.size() / 4 * 3);
    for (std::size_t i = 0; i < input.size(); i += 4) {
        int pad = 0;
        std::uint32_t b = 0;
        for (int j = 0; j < 4; ++j) {
            std::uint8_t c = input[i + j];
            if (c == '=') {
                if (i + 4 != input.size() || j < 2) throw UsageError("base64_decode: bad padding");
                ++pad;
                b <<= 6;
            } else {
                if (pad > 0 || kReverse[c] < 0)
                    throw UsageError("base64_decode: invalid character");
                b = (b << 6) | static_cast<std::uint32_t>(kReverse[c]);
            }
        }
        out.push_back(static_cast<std::uint8_t>((b >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>((b >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(b & 0xff));
    }
    return out;
}

} // namespace sentinel::adv
