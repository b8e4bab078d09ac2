#include "sentinel/pipeline.hpp"

#include <cmath>
#include <memory>
#include <numeric>

namespace sentinel::pipe {

StreamPlan StreamPlan::build(std::size_t n, double fraction, std::uint64_t stream_seed) {
    if (fraction < 0.0 || fraction > 1.0)
        throw ConfigError("stream: encrypted_fraction must be in [0,1]");
    StreamPlan plan;
    plan.order.resize(n);
    std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
    Rng order_rng = derive_rng(stream_seed, 0xa1, 0);
    for (std::size_t i = n; i > 1; --i)
        std::swap(plan.order[i - 1], plan.order[order_rng.uniform(i)]);

    auto n_enc = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    Rng pick_rng = derive_rng(stream_seed, 0xa2, 0);
    for (std::size_t i = n; i > 1; --i)
        std::swap(pick[i - 1], pick[pick_rng.uniform(i)]);
    plan.encrypt.assign(n, false);
    for (std::size_t i = 0; i < n_enc; ++i) plan.encrypt[pick[i]] = true;
    return plan;
}

corpus::FileSample stream_sample(const corpus::SyntheticCorpus& cx, const StreamSpec& spec,
                                 const StreamPlan& plan, std::size_t position) {
    std::size_t index = plan.order.at(position);
    corpus::FileSample sample = cx.make(index);
    if (plan.encrypt.at(index)) {
        auto cipher = adv::CipherConfig::derive(spec.corpus.seed, sample.id);
        sample = adv::apply_mode(sample, spec.mode, cipher);
    }
    return sample;
}

eval::SampleStream make_stream(const StreamSpec& spec, const feat::FeatureSetConfig& features) {
    adv::validate_mode(spec.mode);
    auto cx = std::make_shared<corpus::SyntheticCorpus>(spec.corpus);
    auto plan = std::make_shared<StreamPlan>(
        StreamPlan::build(cx->size(), spec.encrypted_fraction, spec.stream_seed));
    auto pos = std::make_shared<std::size_t>(0);
    return [cx, plan, pos, spec, features]() -> std::optional<eval::LabeledVector> {
        if (*pos >= cx->size()) return std::nullopt;
        corpus::FileSample sample = stream_sample(*cx, spec, *plan, (*pos)++);
        eval::LabeledVector lv;
        lv.x = feat::extract(sample, features).values(features);
        lv.label = sample.label == corpus::Label::Encrypted ? 1 : 0;
        return lv;
    };
}

std::pair<std::vector<std::vector<double>>, std::vector<int>>
materialize_features(const StreamSpec& spec, const feat::FeatureSetConfig& features) {
    auto stream = make_stream(spec, features);
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    while (auto s = stream()) {
        X.push_back(std::move(s->x));
        y.push_back(s->label);
    }
    return {std::move(X), std::move(y)};
}

} // namespace sentinel::pipe
