#include "sentinel/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace sentinel::corpus {

using json = nlohmann::json;

std::string kind_name(FileKind k) {
    switch (k) {
        case FileKind::Text: return "text";
        case FileKind::Csv: return "csv";
        case FileKind::DocLike: return "doc-like";
        case FileKind::ImageLike: return "image-like";
        case FileKind::AudioLike: return "audio-like";
        case FileKind::VideoLike: return "video-like";
        case FileKind::PdfLike: return "pdf-like";
        case FileKind::ArchiveLike: return "archive-like";
    }
    return "archive-like";
}

std::optional<FileKind> kind_from_name(const std::string& name) {
    for (FileKind k : kAllKinds)
        if (kind_name(k) == name) return k;
    return std::nullopt;
}

FileKind kind_from_extension(const std::string& ext) {
    std::string e = ext;
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!e.empty() && e[0] == '.') e = e.substr(1);
    if (e == "txt" || e == "md" || e == "log" || e == "json" || e == "xml" || e == "html")
        return FileKind::Text;
    if (e == "csv" || e == "tsv") return FileKind::Csv;
    if (e == "doc" || e == "docx" || e == "ppt" || e == "pptx" || e == "xls" || e == "xlsx" ||
        e == "odt")
        return FileKind::DocLike;
    if (e == "jpg" || e == "jpeg" || e == "png" || e == "gif" || e == "tif" || e == "tiff" ||
        e == "bmp")
        return FileKind::ImageLike;
    if (e == "mp3" || e == "wav" || e == "flac" || e == "ogg") return FileKind::AudioLike;
    if (e == "mp4" || e == "avi" || e == "mkv" || e == "mov") return FileKind::VideoLike;
    if (e == "pdf") return FileKind::PdfLike;
    return FileKind::ArchiveLike;
}

// ---------------------------------------------------------------------------
// Synthetic generators. These emulate format families statistically: the
// byte-value distributions are distinct per kind, but nothing here decodes.

namespace {

// English-ish letter pool weighted toward frequent letters.
const char kLetterPool[] = "eeeeeeeeeeettttttttaaaaaaaooooooiiiiiinnnnnnssssssrrrrrhhhhh"
                           "ddddllllcccuuummmwwfffggyyppbbvkjxqz";

// flatten > 0 mixes in uniform letter draws (raising entropy); flatten < 0
// redraws from the high-frequency half of the pool (lowering it), giving
// each file its own spot in the natural-language entropy band.
void gen_word(Rng& rng, Bytes& out, double flatten) {
    std::size_t len = 2 + rng.uniform(8);
    for (std::size_t i = 0; i < len; ++i) {
        std::uint8_t ch;
        if (flatten > 0.0 && rng.uniform01() < flatten)
            ch = static_cast<std::uint8_t>('a' + rng.uniform(26));
        else if (flatten < 0.0 && rng.uniform01() < -flatten)
            ch = static_cast<std::uint8_t>(kLetterPool[rng.uniform((sizeof(kLetterPool) - 1) / 2)]);
        else
            ch = static_cast<std::uint8_t>(kLetterPool[rng.uniform(sizeof(kLetterPool) - 1)]);
        out.push_back(ch);
    }
}

Bytes gen_text(Rng& rng, std::size_t size) {
    Bytes out;
    out.reserve(size + 16);
    double flatten = -0.5 + 1.1 * rng.uniform01();
    while (out.size() < size) {
        gen_word(rng, out, flatten);
        if (rng.uniform(12) == 0) out.push_back('.');
        std::size_t col = out.size() % 80;
        if (col > 64 + rng.uniform(12)) {
            out.push_back('\n');
        } else {
            out.push_back(' ');
        }
    }
    out.resize(size);
    return out;
}

Bytes gen_csv(Rng& rng, std::size_t size) {
    Bytes out;
    out.reserve(size + 16);
    // per-file lean toward a few hot digits (measurement data clusters),
    // spreading files across a band of entropies instead of a single point
    double hot = 0.25 + 0.45 * rng.uniform01();
    while (out.size() < size) {
        std::size_t fields = 4 + rng.uniform(5);
        for (std::size_t f = 0; f < fields; ++f) {
            std::size_t digits = 1 + rng.uniform(7);
            for (std::size_t d = 0; d < digits; ++d)
                out.push_back(static_cast<std::uint8_t>(
                    '0' + (rng.uniform01() < hot ? rng.uniform(3) : rng.uniform(10))));
            if (rng.uniform(6) == 0) {
                out.push_back('.');
                out.push_back(static_cast<std::uint8_t>('0' + rng.uniform(10)));
            }
            out.push_back(f + 1 == fields ? '\n' : ',');
        }
    }
    out.resize(size);
    return out;
}

void push_magic(Bytes& out, std::initializer_list<std::uint8_t> magic) {
    out.insert(out.end(), magic.begin(), magic.end());
}

// Shannon entropy (bits/byte) of the tilted-draw distribution: with
// probability t a byte comes uniformly from a span-symbol alphabet, else
// uniformly from all 256 values.
double tilted_entropy(std::size_t span, double t) {
    double p_in = t / static_cast<double>(span) + (1.0 - t) / 256.0;
    double p_out = (1.0 - t) / 256.0;
    double h = -static_cast<double>(span) * p_in * std::log2(p_in);
    if (p_out > 0.0) h -= static_cast<double>(256 - span) * p_out * std::log2(p_out);
    return h;
}

// Inverts tilted_entropy for a target entropy (monotonic in t).
double tilt_for_entropy(std::size_t span, double target_h) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 48; ++i) {
        double mid = 0.5 * (lo + hi);
        (tilted_entropy(span, mid) > target_h ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// "Compressed" body calibrated to a per-file entropy target, with an
// optional block alternation: even/odd 512-byte blocks use tilt +- alt/2,
// a periodic block-entropy signature that encryption flattens. The byte
// distribution is linear in the tilt, so the whole-file entropy still hits
// the target.
void fill_compressed(Rng& rng, Bytes& out, std::size_t upto, std::size_t span, double tilt,
                     double block_alt) {
    double t_even = std::min(1.0, tilt + block_alt / 2.0);
    double t_odd = std::max(0.0, tilt - (t_even - tilt));
    while (out.size() < upto) {
        double t = ((out.size() / 512) % 2) == 0 ? t_even : t_odd;
        if (rng.uniform01() < t)
            out.push_back(static_cast<std::uint8_t>(rng.uniform(span)));
        else
            out.push_back(rng.next_byte());
    }
}

void split_printables(Rng& rng, std::vector<std::uint8_t>& alnum, std::vector<std::uint8_t>& punct) {
    for (int c = 33; c <= 126; ++c)
        (std::isalnum(c) ? alnum : punct).push_back(static_cast<std::uint8_t>(c));
    for (std::size_t i = 0; i < alnum.size(); ++i)
        std::swap(alnum[i], alnum[i + rng.uniform(alnum.size() - i)]);
    for (std::size_t i = 0; i < punct.size(); ++i)
        std::swap(punct[i], punct[i + rng.uniform(punct.size() - i)]);
}

// Emits `symbol()` bytes in newline-terminated lines whose target length is
// log-uniform in [2 KB, 2 MB] (many files end up effectively single-line).
template <typename SymbolFn>
void emit_lines(Rng& rng, Bytes& out, std::size_t size, SymbolFn symbol) {
    double ln_lo = std::log(2048.0), ln_hi = std::log(2.0 * 1024 * 1024);
    auto line_target = static_cast<std::size_t>(std::exp(ln_lo + rng.uniform01() * (ln_hi - ln_lo)));
    std::size_t col = 0;
    while (out.size() < size) {
        out.push_back(symbol());
        if (++col >= line_target) {
            out.push_back('\n');
            col = 0;
        }
    }
    out.resize(size);
}

// Office-container stand-in: encoded object streams over a per-file
// alphanumeric-leaning alphabet of 34-56 symbols (entropy band ~5.1-5.8
// bits/byte).
Bytes gen_doc_like(Rng& rng, std::size_t size) {
    Bytes out;
    out.reserve(size + 64);
    push_magic(out, {0xd0, 0xcf, 0x11, 0xe0, 0x00, 0x00, 0x00, 0x00});
    std::size_t span = 34 + rng.uniform(23);
    std::vector<std::uint8_t> alnum, punct;
    split_printables(rng, alnum, punct);
    double alnum_share = 0.8 + 0.2 * rng.uniform01();
    auto n_alnum = std::min<std::size_t>(
        alnum.size(), static_cast<std::size_t>(std::llround(alnum_share * static_cast<double>(span))));
    std::vector<std::uint8_t> pool(alnum.begin(), alnum.begin() + static_cast<std::ptrdiff_t>(n_alnum));
    pool.insert(pool.end(), punct.begin(),
                punct.begin() + static_cast<std::ptrdiff_t>(span - n_alnum));
    emit_lines(rng, out, size, [&] { return pool[rng.uniform(pool.size())]; });
    return out;
}

// PDF stand-in: ASCII85-style object streams — all 62 alphanumerics at high
// probability plus a light punctuation layer, putting the entropy band at
// ~6.2-6.55 bits/byte while the byte order statistics stay alphanumeric.
Bytes gen_pdf_like(Rng& rng, std::size_t size) {
    Bytes out;
    out.reserve(size + 64);
    push_magic(out, {0x25, 0x44, 0x4f, 0x43, 0x2d, 0x31, 0x0a});
    std::vector<std::uint8_t> alnum, punct;
    split_printables(rng, alnum, punct);
    double punct_mass = 0.07 + 0.18 * rng.uniform01();
    std::size_t n_punct = 24 + rng.uniform(punct.size() - 24 + 1);
    emit_lines(rng, out, size, [&] {
        if (rng.uniform01() < punct_mass) return punct[rng.uniform(n_punct)];
        return alnum[rng.uniform(alnum.size())];
    });
    return out;
}

struct MediaProfile {
    std::initializer_list<std::uint8_t> magic;
    double h_min, h_max;       // per-file entropy target band
    double block_alt;          // even/odd 512-block tilt alternation
    std::size_t marker_period; // 0 = none
};

Bytes gen_media(Rng& rng, std::size_t size, const MediaProfile& p) {
    Bytes out;
    out.reserve(size + 64);
    push_magic(out, p.magic);
    std::size_t span = 64 + 16 * rng.uniform(5); // 64..128
    // top-heavy draw: codec output clusters near the high-entropy end
    double u = rng.uniform01();
    double target = p.h_max - (p.h_max - p.h_min) * u * u * u;
    target = std::max(target, std::log2(static_cast<double>(span)) + 0.25);
    double tilt = tilt_for_entropy(span, target);
    std::size_t next_marker = p.marker_period ? p.marker_period : size + 1;
    while (out.size() < size) {
        std::size_t stop = std::min(size, next_marker);
        fill_compressed(rng, out, stop, span, tilt, p.block_alt);
        if (out.size() >= next_marker && out.size() < size) {
            out.push_back(0xff);
            out.push_back(0xfb);
            out.push_back(static_cast<std::uint8_t>(rng.uniform(16)));
            out.push_back(0x00);
            next_marker += p.marker_period;
        }
    }
    out.resize(size);
    return out;
}

Bytes gen_archive_like(Rng& rng, std::size_t size) {
    Bytes out;
    out.reserve(size + 64);
    push_magic(out, {0x1f, 0x9d, 0x90, 0x01});
    std::size_t span = 96 + 16 * rng.uniform(3); // 96..128
    double u = rng.uniform01();
    double target = 7.98 - 0.78 * u * u; // top-heavy, like the media kinds
    double tilt = tilt_for_entropy(span, target);
    std::size_t next_name = 1024 + rng.uniform(2048);
    while (out.size() < size) {
        std::size_t stop = std::min(size, next_name);
        fill_compressed(rng, out, stop, span, tilt, 0.20);
        if (out.size() >= next_name && out.size() < size) {
            // stored member name
            std::size_t len = 8 + rng.uniform(8);
            for (std::size_t i = 0; i < len && out.size() < size; ++i)
                out.push_back(static_cast<std::uint8_t>('a' + rng.uniform(26)));
            if (out.size() < size) out.push_back(0x00);
            next_name = out.size() + 1024 + rng.uniform(4096);
        }
    }
    out.resize(size);
    return out;
}

Bytes generate_bytes(FileKind kind, Rng& rng, std::size_t size) {
    switch (kind) {
        case FileKind::Text: return gen_text(rng, size);
        case FileKind::Csv: return gen_csv(rng, size);
        case FileKind::DocLike: return gen_doc_like(rng, size);
        case FileKind::PdfLike: return gen_pdf_like(rng, size);
        case FileKind::ImageLike:
            return gen_media(rng, size, {{0x89, 0x49, 0x4d, 0x47, 0x0d, 0x0a}, 6.55, 7.97, 0.35, 0});
        case FileKind::AudioLike:
            return gen_media(rng, size, {{0x49, 0x44, 0x33, 0x04}, 6.9, 7.98, 0.25, 417});
        case FileKind::VideoLike:
            return gen_media(rng, size,
                             {{0x00, 0x00, 0x00, 0x18, 0x66, 0x74}, 6.7, 7.97, 0.30, 4096});
        case FileKind::ArchiveLike: return gen_archive_like(rng, size);
    }
    return {};
}

std::size_t draw_size(Rng& rng, const SizeRange& r) {
    if (r.min_bytes > r.max_bytes)
        throw ConfigError("corpus: size range min > max");
    if (r.min_bytes == r.max_bytes) return r.min_bytes;
    if (r.shape == "uniform")
        return r.min_bytes + rng.uniform(r.max_bytes - r.min_bytes + 1);
    // log-uniform
    double lo = std::log(static_cast<double>(std::max<std::size_t>(r.min_bytes, 1)));
    double hi = std::log(static_cast<double>(r.max_bytes));
    double v = std::exp(lo + rng.uniform01() * (hi - lo));
    auto s = static_cast<std::size_t>(v);
    return std::clamp(s, r.min_bytes, r.max_bytes);
}

} // namespace

SyntheticCorpus::SyntheticCorpus(CorpusSpec spec) : spec_(std::move(spec)) {
    for (FileKind k : kAllKinds) {
        auto it = spec_.counts.find(k);
        if (it == spec_.counts.end()) continue;
        const SizeRange& range =
            spec_.sizes.count(k) ? spec_.sizes.at(k) : spec_.default_size;
        if (range.min_bytes > range.max_bytes)
            throw ConfigError("corpus: size range min > max for " + kind_name(k));
        for (std::size_t i = 0; i < it->second; ++i) {
            Rng r = derive_rng(spec_.seed, static_cast<std::uint64_t>(k) + 1, i);
            plan_.push_back({k, draw_size(r, range), i});
        }
    }
}

FileSample SyntheticCorpus::make(std::size_t index) const {
    const Planned& p = plan_.at(index);
    Rng r = derive_rng(spec_.seed, static_cast<std::uint64_t>(p.kind) + 1, p.ordinal);
    draw_size(r, spec_.sizes.count(p.kind) ? spec_.sizes.at(p.kind) : spec_.default_size);
    FileSample s;
    s.id = kind_name(p.kind) + "-" + std::to_string(p.ordinal);
    s.kind = p.kind;
    s.bytes = generate_bytes(p.kind, r, p.size);
    s.label = Label::Normal;
    s.provenance = Provenance::Synthetic;
    return s;
}

std::vector<FileSample> synth_corpus(const CorpusSpec& spec) {
    SyntheticCorpus c(spec);
    std::vector<FileSample> out;
    out.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c.make(i));
    return out;
}

IngestResult load_directory(const std::filesystem::path& path, bool recurse,
                            std::optional<Label> label) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw ConfigError("load_directory: path does not exist: " + path.string());
    std::vector<fs::path> files;
    std::error_code ec;
    if (recurse) {
        for (auto it = fs::recursive_directory_iterator(path, ec);
             it != fs::recursive_directory_iterator(); it.increment(ec)) {
            if (ec) break;
            if (it->is_regular_file(ec)) files.push_back(it->path());
        }
    } else {
        for (auto it = fs::directory_iterator(path, ec); it != fs::directory_iterator();
             it.increment(ec)) {
            if (ec) break;
            if (it->is_regular_file(ec)) files.push_back(it->path());
        }
    }
    std::sort(files.begin(), files.end());

    IngestResult result;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) {
            result.warnings.push_back({f, "unreadable, skipped"});
            continue;
        }
        FileSample s;
        s.id = f.string();
        s.kind = kind_from_extension(f.extension().string());
        s.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        if (in.bad()) {
            result.warnings.push_back({f, "read error, skipped"});
            continue;
        }
        s.label = label.value_or(Label::Normal);
        s.provenance = Provenance::Ingested;
        result.samples.push_back(std::move(s));
    }
    return result;
}

std::vector<FileSample> shuffle_stream(std::vector<FileSample> samples, std::uint64_t seed) {
    Rng rng = derive_rng(seed, 0x5u, 0);
    for (std::size_t i = samples.size(); i > 1; --i)
        std::swap(samples[i - 1], samples[rng.uniform(i)]);
    return samples;
}

// ---------------------------------------------------------------------------
// CorpusSpec JSON

namespace {
SizeRange size_from_json(const json& j) {
    SizeRange r;
    r.min_bytes = j.value("min_bytes", r.min_bytes);
    r.max_bytes = j.value("max_bytes", r.max_bytes);
    r.shape = j.value("shape", r.shape);
    if (r.min_bytes > r.max_bytes) throw ConfigError("corpus spec: min_bytes > max_bytes");
    if (r.shape != "log" && r.shape != "uniform")
        throw ConfigError("corpus spec: unknown size shape '" + r.shape + "'");
    return r;
}

json size_to_json(const SizeRange& r) {
    return json{{"min_bytes", r.min_bytes}, {"max_bytes", r.max_bytes}, {"shape", r.shape}};
}
} // namespace

CorpusSpec CorpusSpec::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("corpus spec: invalid JSON: ") + e.what());
    }
    CorpusSpec spec;
    spec.seed = j.value("seed", 0ULL);
    spec.encrypted_fraction = j.value("encrypted_fraction", 0.5);
    if (spec.encrypted_fraction < 0.0 || spec.encrypted_fraction > 1.0)
        throw ConfigError("corpus spec: encrypted_fraction out of [0,1]");
    if (j.contains("default_size")) spec.default_size = size_from_json(j.at("default_size"));
    if (j.contains("counts")) {
        for (auto& [name, v] : j.at("counts").items()) {
            auto k = kind_from_name(name);
            if (!k) throw ConfigError("corpus spec: unknown kind '" + name + "'");
            spec.counts[*k] = v.get<std::size_t>();
        }
    }
    if (j.contains("sizes")) {
        for (auto& [name, v] : j.at("sizes").items()) {
            auto k = kind_from_name(name);
            if (!k) throw ConfigError("corpus spec: unknown kind '" + name + "'");
            spec.sizes[*k] = size_from_json(v);
        }
    }
    return spec;
}

std::string CorpusSpec::to_json_text() const {
    json counts = json::object(), sizes = json::object();
    for (auto& [k, n] : this->counts) counts[kind_name(k)] = n;
    for (auto& [k, r] : this->sizes) sizes[kind_name(k)] = size_to_json(r);
    json j{{"seed", seed},
           {"encrypted_fraction", encrypted_fraction},
           {"default_size", size_to_json(default_size)},
           {"counts", counts},
           {"sizes", sizes}};
    return j.dump(2);
}

CorpusSpec CorpusSpec::desk_scale(std::uint64_t seed) {
    CorpusSpec spec;
    spec.seed = seed;
    spec.default_size = {1024, 5 * 1024 * 1024, "log"};
    spec.counts[FileKind::Text] = 350;
    spec.counts[FileKind::Csv] = 150;
    for (FileKind k : {FileKind::DocLike, FileKind::PdfLike, FileKind::ImageLike,
                       FileKind::AudioLike, FileKind::VideoLike, FileKind::ArchiveLike})
        spec.counts[k] = 250;
    return spec;
}

} // namespace sentinel::corpus
