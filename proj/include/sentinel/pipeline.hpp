#ifndef SENTINEL_PIPELINE_HPP
#define SENTINEL_PIPELINE_HPP

#include <optional>

#include "sentinel/adversary.hpp"
#include "sentinel/corpus.hpp"
#include "sentinel/evaluation.hpp"
#include "sentinel/features.hpp"

namespace sentinel::pipe {

// A reproducible labeled stream: synthetic corpus, a seeded assignment of
// exactly round(fraction * n) samples to the adversary, and a seeded
// presentation order.
struct StreamSpec {
    corpus::CorpusSpec corpus;
    adv::AdversaryMode mode = adv::FullCipher{};
    double encrypted_fraction = 0.5;
    std::uint64_t stream_seed = 0; // order + assignment; corpus bytes come from corpus.seed
};

// positions in presentation order -> (corpus index, encrypt?)
struct StreamPlan {
    std::vector<std::size_t> order;
    std::vector<bool> encrypt;

    static StreamPlan build(std::size_t n, double fraction, std::uint64_t stream_seed);
};

// Materializes sample `position` of the stream: generate, optionally
// encrypt, return the sample.
corpus::FileSample stream_sample(const corpus::SyntheticCorpus& cx, const StreamSpec& spec,
                                 const StreamPlan& plan, std::size_t position);

// Lazy pull stream of extracted feature vectors in presentation order.
eval::SampleStream make_stream(const StreamSpec& spec, const feat::FeatureSetConfig& features);

// Everything at once, for batch baselines.
std::pair<std::vector<std::vector<double>>, std::vector<int>>
materialize_features(const StreamSpec& spec, const feat::FeatureSetConfig& features);

} // namespace sentinel::pipe

#endif
