#include "sentinel/features.hpp"

#include <cmath>

namespace sentinel::feat {

double shannon_entropy(const ByteHistogram& hist) {
    if (hist.total == 0) return 0.0;
    double h = 0.0;
    const double n = static_cast<double>(hist.total);
    for (std::uint64_t c : hist.counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

Percentiles percentiles(const ByteHistogram& hist) {
    if (hist.total == 0) throw UsageError("percentiles: empty histogram");
    auto nearest_rank = [&](double q) {
        auto rank = static_cast<std::uint64_t>(
            std::ceil(q * static_cast<double>(hist.total)));
        if (rank == 0) rank = 1;
        std::uint64_t cum = 0;
        for (int v = 0; v < 256; ++v) {
            cum += hist.counts[v];
            if (cum >= rank) return v;
        }
        return 255;
    };
    return {nearest_rank(0.25), nearest_rank(0.50), nearest_rank(0.75)};
}

void RunningMoments::add(double x) {
    // one-pass central moment update (Welford / Pebay)
    double n1 = static_cast<double>(n_);
    ++n_;
    double n = static_cast<double>(n_);
    double delta = x - mean_;
    double delta_n = delta / n;
    double delta_n2 = delta_n * delta_n;
    double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3 * n + 3) + 6 * delta_n2 * m2_ - 4 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2) - 3 * delta_n * m2_;
    m2_ += term1;
}

void RunningMoments::ingest(std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) add(static_cast<double>(b));
}

double RunningMoments::mean() const {
    if (n_ < 1) throw UsageError("moments: mean undefined for N = 0");
    return mean_;
}

double RunningMoments::variance() const {
    if (n_ < 2) throw UsageError("moments: variance undefined for N < 2");
    return m2_ / static_cast<double>(n_);
}

double RunningMoments::skewness(bool* degenerate) const {
    if (n_ < 3) throw UsageError("moments: skewness undefined for N < 3");
    if (degenerate) *degenerate = false;
    if (m2_ <= 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    double n = static_cast<double>(n_);
    double g1 = std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

double RunningMoments::kurtosis(bool* degenerate) const {
    if (n_ < 4) throw UsageError("moments: kurtosis undefined for N < 4");
    if (degenerate) *degenerate = false;
    if (m2_ <= 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    double n = static_cast<double>(n_);
    double g2 = n * m4_ / (m2_ * m2_) - 3.0;
    return ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
}

double differential_entropy(double variance, bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (variance <= 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return 0.5 * std::log2(2.0 * M_PI * M_E * variance);
}

FeatureSetConfig FeatureSetConfig::parse(const std::string& name) {
    FeatureSetConfig cfg;
    if (name == "entropy-only") cfg.set = FeatureSet::EntropyOnly;
    else if (name == "full") cfg.set = FeatureSet::Full;
    else if (name == "full+de") cfg.set = FeatureSet::FullPlusDiffEntropy;
    else throw ConfigError("unknown feature set '" + name + "'");
    return cfg;
}

std::string FeatureSetConfig::name() const {
    switch (set) {
        case FeatureSet::EntropyOnly: return "entropy-only";
        case FeatureSet::Full: return "full";
        case FeatureSet::FullPlusDiffEntropy: return "full+de";
    }
    return "full";
}

std::vector<double> FeatureVector::values(const FeatureSetConfig& cfg) const {
    std::vector<double> v;
    v.push_back(shannon_entropy);
    if (cfg.set != FeatureSet::EntropyOnly) {
        v.insert(v.end(), {byte_mean, byte_variance, byte_skewness, byte_kurtosis,
                           avg_string_length, avg_word_length, entropy_variance, pct25, pct50,
                           pct75});
        if (cfg.set == FeatureSet::FullPlusDiffEntropy) v.push_back(differential_entropy);
    }
    if (cfg.include_file_size) v.push_back(file_size);
    return v;
}

std::vector<std::string> FeatureVector::names(const FeatureSetConfig& cfg) {
    std::vector<std::string> v{"shannon_entropy"};
    if (cfg.set != FeatureSet::EntropyOnly) {
        v.insert(v.end(), {"byte_mean", "byte_variance", "byte_skewness", "byte_kurtosis",
                           "avg_string_length", "avg_word_length", "entropy_variance", "pct25",
                           "pct50", "pct75"});
        if (cfg.set == FeatureSet::FullPlusDiffEntropy) v.push_back("differential_entropy");
    }
    if (cfg.include_file_size) v.push_back("file_size");
    return v;
}

namespace {
inline bool is_printable(std::uint8_t b) { return b >= 0x20 && b <= 0x7e; }
} // namespace

void StreamingExtractor::end_word() {
    if (word_len_ > 0) {
        ++pending_words_;
        pending_word_bytes_ += word_len_;
        word_len_ = 0;
    }
}

void StreamingExtractor::end_run() {
    end_word();
    if (run_len_ >= kMinRunLength) {
        ++runs_;
        run_bytes_ += run_len_;
        words_ += pending_words_;
        word_bytes_ += pending_word_bytes_;
    }
    run_len_ = 0;
    pending_words_ = 0;
    pending_word_bytes_ = 0;
}

void StreamingExtractor::end_block() {
    if (block_fill_ == 0) return;
    ByteHistogram bh;
    bh.counts.fill(0);
    for (int v = 0; v < 256; ++v) bh.counts[v] = block_counts_[v];
    bh.total = block_fill_;
    double h = shannon_entropy(bh);
    ++blocks_;
    double delta = h - blockh_mean_;
    blockh_mean_ += delta / static_cast<double>(blocks_);
    blockh_m2_ += delta * (h - blockh_mean_);
    block_counts_.fill(0);
    block_fill_ = 0;
}

void StreamingExtractor::ingest(std::span<const std::uint8_t> data) {
    hist_.ingest(data);
    moments_.ingest(data);
    for (std::uint8_t b : data) {
        ++block_counts_[b];
        if (++block_fill_ == kBlockSize) end_block();

        if (is_printable(b)) {
            ++run_len_;
            if (b == ' ')
                end_word();
            else
                ++word_len_;
        } else {
            end_run();
        }
    }
}

FeatureVector StreamingExtractor::finalize(const FeatureSetConfig& cfg) {
    end_block();
    end_run();

    FeatureVector fv;
    fv.file_size = static_cast<double>(hist_.total);
    if (hist_.total == 0) {
        fv.degenerate = true;
        return fv;
    }
    fv.shannon_entropy = shannon_entropy(hist_);
    fv.byte_mean = moments_.mean();
    if (moments_.count() >= 2) fv.byte_variance = moments_.variance();
    bool deg_s = true, deg_k = true;
    if (moments_.count() >= 3) fv.byte_skewness = moments_.skewness(&deg_s);
    if (moments_.count() >= 4) fv.byte_kurtosis = moments_.kurtosis(&deg_k);
    fv.degenerate = deg_s || deg_k;
    fv.avg_string_length =
        runs_ ? static_cast<double>(run_bytes_) / static_cast<double>(runs_) : 0.0;
    fv.avg_word_length =
        words_ ? static_cast<double>(word_bytes_) / static_cast<double>(words_) : 0.0;
    fv.entropy_variance = blocks_ ? blockh_m2_ / static_cast<double>(blocks_) : 0.0;
    Percentiles p = percentiles(hist_);
    fv.pct25 = p.p25;
    fv.pct50 = p.p50;
    fv.pct75 = p.p75;
    bool deg_de = false;
    fv.differential_entropy = differential_entropy(fv.byte_variance, &deg_de);
    fv.degenerate = fv.degenerate || deg_de;
    (void)cfg;
    return fv;
}

FeatureVector extract_bytes(std::span<const std::uint8_t> bytes, const FeatureSetConfig& cfg) {
    StreamingExtractor ex;
    ex.ingest(bytes);
    return ex.finalize(cfg);
}

FeatureVector extract(const corpus::FileSample& sample, const FeatureSetConfig& cfg) {
    return extract_bytes(sample.bytes, cfg);
}

} // namespace sentinel::feat
