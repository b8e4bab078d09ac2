#ifndef SENTINEL_CORPUS_HPP
#define SENTINEL_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/common.hpp"

namespace sentinel::corpus {

enum class FileKind {
    Text,
    Csv,
    DocLike,
    ImageLike,
    AudioLike,
    VideoLike,
    PdfLike,
    ArchiveLike,
};

constexpr FileKind kAllKinds[] = {
    FileKind::Text,      FileKind::Csv,       FileKind::DocLike,
    FileKind::ImageLike, FileKind::AudioLike, FileKind::VideoLike,
    FileKind::PdfLike,   FileKind::ArchiveLike,
};

std::string kind_name(FileKind k);
std::optional<FileKind> kind_from_name(const std::string& name);
FileKind kind_from_extension(const std::string& ext);

enum class Label : int { Normal = 0, Encrypted = 1 };
enum class Provenance { Synthetic, Ingested };

struct FileSample {
    std::string id;
    FileKind kind = FileKind::ArchiveLike;
    Bytes bytes;
    Label label = Label::Normal;
    Provenance provenance = Provenance::Synthetic;
    std::string adversary_mode; // empty unless label == Encrypted
};

struct SizeRange {
    std::size_t min_bytes = 1024;
    std::size_t max_bytes = 5 * 1024 * 1024;
    // "log" (log-uniform, default) or "uniform"
    std::string shape = "log";
};

struct CorpusSpec {
    std::uint64_t seed = 0;
    std::map<FileKind, std::size_t> counts;
    std::map<FileKind, SizeRange> sizes; // falls back to default_size per kind
    SizeRange default_size;
    double encrypted_fraction = 0.5; // consumed by pipelines, not by synthesis

    static CorpusSpec from_json_text(const std::string& text);
    std::string to_json_text() const;

    // the desk-scale default mix: 2000 files, 1KB-5MB
    static CorpusSpec desk_scale(std::uint64_t seed);
};

// Lazy view over a synthetic corpus: every sample is a pure function of
// (spec, index), so samples can be materialized in any order.
class SyntheticCorpus {
public:
    explicit SyntheticCorpus(CorpusSpec spec);
    std::size_t size() const { return plan_.size(); }
    FileSample make(std::size_t index) const;

private:
    struct Planned {
        FileKind kind;
        std::size_t size;
        std::uint64_t ordinal; // per-kind ordinal, seeds the generator
    };
    CorpusSpec spec_;
    std::vector<Planned> plan_;
};

// Materializes the whole corpus; normal samples only.
std::vector<FileSample> synth_corpus(const CorpusSpec& spec);

struct IngestWarning {
    std::filesystem::path path;
    std::string message;
};

struct IngestResult {
    std::vector<FileSample> samples;
    std::vector<IngestWarning> warnings;
};

IngestResult load_directory(const std::filesystem::path& path, bool recurse,
                            std::optional<Label> label = std::nullopt);

std::vector<FileSample> shuffle_stream(std::vector<FileSample> samples, std::uint64_t seed);

} // namespace sentinel::corpus

#endif
