#ifndef SENTINEL_FEATURES_HPP
#define SENTINEL_FEATURES_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sentinel/common.hpp"
#include "sentinel/corpus.hpp"

namespace sentinel::feat {

struct ByteHistogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;

    void ingest(std::span<const std::uint8_t> data) {
        for (std::uint8_t b : data) ++counts[b];
        total += data.size();
    }
};

// Shannon entropy in bits/byte; 0 for an empty histogram.
double shannon_entropy(const ByteHistogram& hist);

// Nearest-rank percentiles (rank = ceil(q*N)); requires total >= 1.
struct Percentiles {
    int p25, p50, p75;
};
Percentiles percentiles(const ByteHistogram& hist);

// One-pass accumulator for mean/variance/skewness/kurtosis.
// Variance is population (1/N); skewness and kurtosis are the
// bias-corrected sample estimators (kurtosis is excess).
class RunningMoments {
public:
    void ingest(std::span<const std::uint8_t> data);
    void add(double x);

    std::uint64_t count() const { return n_; }
    double mean() const;               // requires n >= 1
    double variance() const;           // population, requires n >= 2
    // 0 with degenerate=true when sigma == 0; require n >= 3 (skew), n >= 4 (kurt)
    double skewness(bool* degenerate = nullptr) const;
    double kurtosis(bool* degenerate = nullptr) const;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0, m2_ = 0, m3_ = 0, m4_ = 0;
};

// Gaussian-model differential entropy h = 1/2 log2(2*pi*e*var), in bits.
// Returns 0 and sets *degenerate when variance <= 0.
double differential_entropy(double variance, bool* degenerate = nullptr);

enum class FeatureSet { EntropyOnly, Full, FullPlusDiffEntropy };

struct FeatureSetConfig {
    FeatureSet set = FeatureSet::Full;
    bool include_file_size = false; // excluded by default in online mode

    static FeatureSetConfig parse(const std::string& name); // "entropy-only"|"full"|"full+de"
    std::string name() const;
};

struct FeatureVector {
    double shannon_entropy = 0;
    double byte_mean = 0;
    double byte_variance = 0;
    double byte_skewness = 0;
    double byte_kurtosis = 0;
    double avg_string_length = 0;
    double avg_word_length = 0;
    double entropy_variance = 0;
    double pct25 = 0, pct50 = 0, pct75 = 0;
    double differential_entropy = 0;
    double file_size = 0;
    bool degenerate = false;

    // fixed documented order per feature set
    std::vector<double> values(const FeatureSetConfig& cfg) const;
    static std::vector<std::string> names(const FeatureSetConfig& cfg);
};

// Streaming single-pass extractor; feed chunks in order, then finalize.
class StreamingExtractor {
public:
    static constexpr std::size_t kBlockSize = 512;
    static constexpr std::size_t kMinRunLength = 4; // printable run threshold

    void ingest(std::span<const std::uint8_t> data);
    FeatureVector finalize(const FeatureSetConfig& cfg);

private:
    void end_block();
    void end_run();
    void end_word();

    ByteHistogram hist_;
    RunningMoments moments_;
    // per-512-byte-block entropies (population variance over blocks)
    std::array<std::uint32_t, 256> block_counts_{};
    std::size_t block_fill_ = 0;
    std::uint64_t blocks_ = 0;
    double blockh_mean_ = 0, blockh_m2_ = 0;
    // printable-run / word bookkeeping
    std::uint64_t run_len_ = 0, word_len_ = 0;
    std::uint64_t pending_words_ = 0, pending_word_bytes_ = 0;
    std::uint64_t runs_ = 0, run_bytes_ = 0;
    std::uint64_t words_ = 0, word_bytes_ = 0;
};

FeatureVector extract_bytes(std::span<const std::uint8_t> bytes, const FeatureSetConfig& cfg);
FeatureVector extract(const corpus::FileSample& sample, const FeatureSetConfig& cfg);

} // namespace sentinel::feat

#endif
