#include "sentinel/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace sentinel::adv {

namespace {

std::uint64_t mb_units(std::uint64_t total_len) {
    return (total_len + kMB - 1) / kMB; // final partial MB counts as a unit
}

void push_range(std::vector<ByteRange>& ranges, std::uint64_t offset, std::uint64_t length,
                std::uint64_t total_len) {
    if (offset >= total_len) return;
    length = std::min(length, total_len - offset);
    if (length == 0) return;
    if (!ranges.empty()) {
        ByteRange& last = ranges.back();
        if (offset <= last.offset + last.length) { // adjacent or overlapping: merge
            std::uint64_t end = std::max(last.offset + last.length, offset + length);
            last.length = end - last.offset;
            return;
        }
    }
    ranges.push_back({offset, length});
}

// mask from an MB-indexed predicate: encrypted iff pred(i) for MB index i
EncryptionMask mb_mask(std::uint64_t total_len, const std::function<bool(std::uint64_t)>& pred) {
    EncryptionMask mask;
    mask.total_len = total_len;
    std::uint64_t units = mb_units(total_len);
    for (std::uint64_t i = 0; i < units; ++i)
        if (pred(i)) push_range(mask.ranges, i * kMB, kMB, total_len);
    return mask;
}

// mask from a byte-period predicate: encrypted iff b mod period < width
EncryptionMask periodic_mask(std::uint64_t total_len, std::uint64_t period, std::uint64_t width) {
    EncryptionMask mask;
    mask.total_len = total_len;
    for (std::uint64_t start = 0; start < total_len; start += period)
        push_range(mask.ranges, start, width, total_len);
    return mask;
}

EncryptionMask full_mask(std::uint64_t total_len) {
    EncryptionMask mask;
    mask.total_len = total_len;
    if (total_len > 0) mask.ranges.push_back({0, total_len});
    return mask;
}

} // namespace

std::uint64_t EncryptionMask::encrypted_bytes() const {
    std::uint64_t sum = 0;
    for (const auto& r : ranges) sum += r.length;
    return sum;
}

bool EncryptionMask::contains(std::uint64_t byte) const {
    auto it = std::upper_bound(ranges.begin(), ranges.end(), byte,
                               [](std::uint64_t b, const ByteRange& r) { return b < r.offset; });
    if (it == ranges.begin()) return false;
    --it;
    return byte < it->offset + it->length;
}

double encrypted_fraction(const EncryptionMask& mask) {
    if (mask.total_len == 0) return 0.0;
    return static_cast<double>(mask.encrypted_bytes()) / static_cast<double>(mask.total_len);
}

void validate_mode(const AdversaryMode& mode) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SkipStep>) {
                if (m.enc_mb < 1) throw ConfigError("skipstep: Y must be >= 1");
            } else if constexpr (std::is_same_v<T, Fast>) {
                if (m.head_mb < 1) throw ConfigError("fast: N must be >= 1");
            } else if constexpr (std::is_same_v<T, Percent>) {
                if (m.enc_mb < 1) throw ConfigError("percent: N must be >= 1");
                if (m.percent < 0.0 || m.percent > 100.0)
                    throw ConfigError("percent: P must be in [0,100]");
            } else if constexpr (std::is_same_v<T, SmartPattern>) {
                if (m.chunk_mb < 1) throw ConfigError("smart: N must be >= 1");
                if (m.percent_step <= 0.0 || m.percent_step > 100.0)
                    throw ConfigError("smart: P must be in (0,100]");
            } else if constexpr (std::is_same_v<T, NullDilution>) {
                if (m.ratio <= 0.0 || m.ratio >= 1.0)
                    throw ConfigError("nulldilute: ratio must be in (0,1)");
            }
        },
        mode);
}

EncryptionMask build_mask(const AdversaryMode& mode, std::uint64_t total_len) {
    validate_mode(mode);
    return std::visit(
        [&](const auto& m) -> EncryptionMask {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FullCipher> || std::is_same_v<T, CipherThenBase64> ||
                          std::is_same_v<T, NullDilution>) {
                return full_mask(total_len);
            } else if constexpr (std::is_same_v<T, SkipStep>) {
                std::uint64_t period = m.skip_mb + m.enc_mb;
                return mb_mask(total_len,
                               [&](std::uint64_t i) { return i % period >= m.skip_mb; });
            } else if constexpr (std::is_same_v<T, Fast>) {
                return mb_mask(total_len, [&](std::uint64_t i) { return i < m.head_mb; });
            } else if constexpr (std::is_same_v<T, Percent>) {
                // P_MB rounded to nearest whole MB, minimum 1 when P > 0
                double raw = m.percent / 100.0 * static_cast<double>(mb_units(total_len));
                std::uint64_t p_mb = static_cast<std::uint64_t>(std::llround(raw));
                if (m.percent > 0.0 && p_mb == 0) p_mb = 1;
                std::uint64_t period = m.enc_mb + p_mb;
                return mb_mask(total_len, [&](std::uint64_t i) { return i % period >= p_mb; });
            } else if constexpr (std::is_same_v<T, Alternate16>) {
                return periodic_mask(total_len, 32, 16);
            } else if constexpr (std::is_same_v<T, SmartPattern>) {
                EncryptionMask mask;
                mask.total_len = total_len;
                double step = m.percent_step / 100.0 * static_cast<double>(total_len);
                std::uint64_t chunk = m.chunk_mb * kMB;
                if (step < 1.0) return full_mask(total_len); // steps collapse to offset 0
                for (std::uint64_t k = 0;; ++k) {
                    auto start = static_cast<std::uint64_t>(
                        std::floor(static_cast<double>(k) * step));
                    if (start >= total_len) break;
                    push_range(mask.ranges, start, chunk, total_len);
                }
                return mask;
            } else if constexpr (std::is_same_v<T, BlackBasta>) {
                if (total_len < 704) return full_mask(total_len);
                if (total_len < 4096) return periodic_mask(total_len, 256, 64);
                return periodic_mask(total_len, 192, 64);
            } else if constexpr (std::is_same_v<T, ParadiseTiered>) {
                const std::uint64_t chunk = 5 * kMB / 2; // 2.5 MB
                if (total_len < 5 * kMB) return full_mask(total_len);
                EncryptionMask mask;
                mask.total_len = total_len;
                if (total_len <= 100 * kMB) {
                    push_range(mask.ranges, 0, chunk, total_len);
                    push_range(mask.ranges, total_len - chunk, chunk, total_len);
                } else {
                    for (std::uint64_t k = 0; k < 10; ++k)
                        push_range(mask.ranges, k * total_len / 10, chunk, total_len);
                }
                return mask;
            }
        },
        mode);
}

corpus::FileSample apply_mode(const corpus::FileSample& sample, const AdversaryMode& mode,
                              const CipherConfig& cipher) {
    if (sample.label == corpus::Label::Encrypted)
        throw UsageError("apply_mode: sample already encrypted");
    validate_mode(mode);

    corpus::FileSample out = sample;
    EncryptionMask mask = build_mask(mode, out.bytes.size());
    for (const auto& r : mask.ranges)
        ctr_xor(cipher, std::span<std::uint8_t>(out.bytes.data() + r.offset, r.length), r.offset);

    if (std::holds_alternative<CipherThenBase64>(mode)) {
        out.bytes = base64_encode(out.bytes);
    } else if (auto* nd = std::get_if<NullDilution>(&mode)) {
        auto stride = static_cast<std::size_t>(std::floor(1.0 / nd->ratio));
        Bytes diluted;
        diluted.reserve(out.bytes.size() + out.bytes.size() / stride + 1);
        for (std::size_t i = 0; i < out.bytes.size(); ++i) {
            diluted.push_back(out.bytes[i]);
            if ((i + 1) % stride == 0) diluted.push_back(0x00);
        }
        out.bytes = std::move(diluted);
    }

    out.label = corpus::Label::Encrypted;
    out.adversary_mode = mode_name(mode);
    return out;
}

std::string mode_name(const AdversaryMode& mode) {
    std::ostringstream os;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FullCipher>) os << "full";
            else if constexpr (std::is_same_v<T, SkipStep>) os << "skipstep:" << m.skip_mb << "," << m.enc_mb;
            else if constexpr (std::is_same_v<T, Fast>) os << "fast:" << m.head_mb;
            else if constexpr (std::is_same_v<T, Percent>) os << "percent:" << m.enc_mb << "," << m.percent;
            else if constexpr (std::is_same_v<T, Alternate16>) os << "alt16";
            else if constexpr (std::is_same_v<T, SmartPattern>) os << "smart:" << m.chunk_mb << "," << m.percent_step;
            else if constexpr (std::is_same_v<T, BlackBasta>) os << "blackbasta";
            else if constexpr (std::is_same_v<T, ParadiseTiered>) os << "paradise";
            else if constexpr (std::is_same_v<T, CipherThenBase64>) os << "aes-base64";
            else if constexpr (std::is_same_v<T, NullDilution>) os << "nulldilute:" << m.ratio;
        },
        mode);
    return os.str();
}

AdversaryMode parse_mode(const std::string& text) {
    std::string head = text, args;
    if (auto colon = text.find(':'); colon != std::string::npos) {
        head = text.substr(0, colon);
        args = text.substr(colon + 1);
    }
    auto parse_two = [&](std::uint64_t& a, double& b) {
        auto comma = args.find(',');
        if (comma == std::string::npos) throw ConfigError("mode '" + head + "' needs N,P");
        try {
            a = std::stoull(args.substr(0, comma));
            b = std::stod(args.substr(comma + 1));
        } catch (const std::exception&) {
            throw ConfigError("mode '" + head + "': bad parameters '" + args + "'");
        }
    };

    AdversaryMode mode;
    if (head == "full") mode = FullCipher{};
    else if (head == "alt16") mode = Alternate16{};
    else if (head == "blackbasta") mode = BlackBasta{};
    else if (head == "paradise") mode = ParadiseTiered{};
    else if (head == "aes-base64") mode = CipherThenBase64{};
    else if (head == "skipstep") {
        std::uint64_t n = 0; double y = 0;
        parse_two(n, y);
        mode = SkipStep{n, static_cast<std::uint64_t>(y)};
    } else if (head == "fast") {
        try {
            mode = Fast{std::stoull(args)};
        } catch (const std::exception&) { throw ConfigError("fast: bad parameter '" + args + "'"); }
    } else if (head == "percent") {
        std::uint64_t n = 0; double p = 0;
        parse_two(n, p);
        mode = Percent{n, p};
    } else if (head == "smart") {
        std::uint64_t n = 0; double p = 0;
        parse_two(n, p);
        mode = SmartPattern{n, p};
    } else if (head == "nulldilute") {
        try {
            mode = NullDilution{std::stod(args)};
        } catch (const std::exception&) { throw ConfigError("nulldilute: bad ratio '" + args + "'"); }
    } else {
        throw ConfigError("unknown adversary mode '" + text + "'");
    }
    validate_mode(mode);
    return mode;
}

} // namespace sentinel::adv
