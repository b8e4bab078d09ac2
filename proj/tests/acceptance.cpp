// End-to-end acceptance gate: one self-contained check per release
// criterion, each printed as a single pass/fail line. Exits non-zero when
// any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sentinel/adversary.hpp"
#include "sentinel/common.hpp"
#include "sentinel/corpus.hpp"
#include "sentinel/evaluation.hpp"
#include "sentinel/features.hpp"
#include "sentinel/guard.hpp"
#include "sentinel/model.hpp"
#include "sentinel/pipeline.hpp"

using namespace sentinel;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Bytes random_bytes(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Bytes b(n);
    for (auto& x : b) x = rng.next_byte();
    return b;
}

double entropy_of(const Bytes& b) {
    feat::ByteHistogram h;
    h.ingest(b);
    return feat::shannon_entropy(h);
}

// mixed-kind corpus spec used by several criteria
corpus::CorpusSpec mixed_spec(std::uint64_t seed, std::size_t per_kind,
                              std::size_t min_bytes, std::size_t max_bytes) {
    corpus::CorpusSpec spec;
    spec.seed = seed;
    for (corpus::FileKind k : corpus::kAllKinds) spec.counts[k] = per_kind;
    spec.default_size = {min_bytes, max_bytes, "log"};
    return spec;
}

eval::PrequentialReport bench(const std::string& model_name, const std::string& mode,
                              const std::string& features, std::uint64_t seed,
                              std::unique_ptr<ml::OnlineModel>* keep_model = nullptr) {
    pipe::StreamSpec spec;
    spec.corpus = corpus::CorpusSpec::desk_scale(seed);
    spec.mode = adv::parse_mode(mode);
    spec.encrypted_fraction = 0.5;
    spec.stream_seed = seed ^ 0x5e2712e1ULL;
    auto model = ml::OnlineModel::create(model_name, seed);
    feat::FeatureSetConfig cfg = feat::FeatureSetConfig::parse(features);
    eval::PrequentialReport report = eval::run_prequential(pipe::make_stream(spec, cfg), *model, 200);
    if (keep_model) *keep_model = std::move(model);
    return report;
}

std::string fmt_batches(const eval::PrequentialReport& r) {
    std::ostringstream os;
    os.precision(3);
    for (const auto& b : r.batches) os << b.accuracy << " ";
    return os.str();
}

// ---------------------------------------------------------------------------

Check criterion_1() {
    Check c;
    auto start = std::chrono::steady_clock::now();
    c.expect(entropy_of(Bytes(4096, 0x00)) == 0.0, "all-zero entropy != 0");
    Bytes all;
    for (int v = 0; v < 256; ++v) all.push_back(static_cast<std::uint8_t>(v));
    c.expect(std::fabs(entropy_of(all) - 8.0) <= 1e-9, "256-distinct entropy != 8");
    adv::CipherConfig cfg = adv::CipherConfig::derive(1, "c1");
    double h = entropy_of(adv::ctr_encrypt(cfg, Bytes(1 << 20, 0x00)));
    c.expect(h >= 7.99, "ciphertext entropy " + std::to_string(h) + " < 7.99");
    c.expect(seconds_since(start) < 1.0, "runtime >= 1s");
    return c;
}

Check criterion_2() {
    Check c;
    auto start = std::chrono::steady_clock::now();
    auto samples = corpus::synth_corpus(mixed_spec(2, 13, 256 * 1024, 1024 * 1024));
    samples.resize(100);
    for (const auto& s : samples) {
        auto enc = adv::apply_mode(s, adv::CipherThenBase64{}, adv::CipherConfig::derive(2, s.id));
        double h = entropy_of(enc.bytes);
        if (h < 5.97 || h > 6.01) {
            c.expect(false, s.id + " entropy " + std::to_string(h) + " outside [5.97, 6.01]");
            break;
        }
    }
    c.expect(seconds_since(start) < 30.0, "runtime >= 30s");
    return c;
}

Check criterion_3() {
    Check c;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        std::size_t n = (1 << 20) + static_cast<std::size_t>(seed) * 123457;
        double ratio = static_cast<double>(adv::base64_encode(random_bytes(n, seed)).size()) /
                       static_cast<double>(n);
        c.expect(ratio >= 1.333 && ratio <= 1.334,
                 "growth ratio " + std::to_string(ratio) + " outside [1.333, 1.334]");
    }
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = rng.uniform(10000);
        std::size_t got = adv::base64_encode(random_bytes(n, 100 + i)).size();
        if (got != 4 * ((n + 2) / 3)) {
            c.expect(false, "length formula violated at n=" + std::to_string(n));
            break;
        }
    }
    return c;
}

Check criterion_4() {
    Check c;
    auto start = std::chrono::steady_clock::now();
    Rng rng(4);

    // exact fraction laws
    for (int i = 0; i < 50; ++i) {
        std::uint64_t len = 768 + 256 * rng.uniform(13);
        c.expect(adv::encrypted_fraction(adv::build_mask(adv::BlackBasta{}, len)) == 0.25,
                 "tier-2 fraction != 1/4 at " + std::to_string(len));
        len = 192 * (22 + rng.uniform(5000));
        double f = adv::encrypted_fraction(adv::build_mask(adv::BlackBasta{}, len));
        c.expect(std::fabs(f - 1.0 / 3.0) < 1e-12,
                 "tier-3 fraction != 1/3 at " + std::to_string(len));
        len = 2 * adv::kMB * (1 + rng.uniform(16));
        c.expect(adv::encrypted_fraction(adv::build_mask(adv::SkipStep{1, 1}, len)) == 0.5,
                 "alternating-MB fraction != 1/2 at " + std::to_string(len));
    }
    c.expect(adv::encrypted_fraction(adv::build_mask(adv::ParadiseTiered{}, 50 * adv::kMB)) == 0.1,
             "tiered 50 MB fraction != 0.1");
    c.expect(adv::encrypted_fraction(adv::build_mask(adv::ParadiseTiered{}, 200 * adv::kMB)) ==
                 0.125,
             "tiered 200 MB fraction != 0.125");

    // per-byte predicate oracle, 200 random sizes per mode
    auto check_bytes = [&](const adv::AdversaryMode& mode, std::uint64_t len,
                           const std::function<bool(std::uint64_t)>& pred) {
        adv::EncryptionMask mask = adv::build_mask(mode, len);
        std::size_t r = 0;
        std::uint64_t enc = 0;
        for (std::uint64_t b = 0; b < len; ++b) {
            while (r < mask.ranges.size() &&
                   b >= mask.ranges[r].offset + mask.ranges[r].length)
                ++r;
            bool in_mask = r < mask.ranges.size() && b >= mask.ranges[r].offset;
            bool expected = pred(b);
            if (in_mask != expected) {
                c.expect(false, adv::mode_name(mode) + " disagrees with oracle at len=" +
                                    std::to_string(len) + " byte=" + std::to_string(b));
                return;
            }
            if (expected) ++enc;
        }
        c.expect(mask.encrypted_bytes() == enc, "encrypted_bytes mismatch");
    };

    for (int i = 0; i < 200; ++i) {
        std::uint64_t len = rng.uniform(256 * 1024);
        check_bytes(adv::BlackBasta{}, len, [len](std::uint64_t b) {
            if (len < 704) return true;
            if (len < 4096) return b % 256 < 64;
            return b % 192 < 64;
        });
        if (!c.ok) return c;
    }
    for (int i = 0; i < 200; ++i) {
        std::uint64_t len = rng.uniform(6 * adv::kMB);
        check_bytes(adv::SkipStep{1, 1}, len,
                    [](std::uint64_t b) { return (b / adv::kMB) % 2 == 1; });
        if (!c.ok) return c;
    }
    for (int i = 0; i < 200; ++i) {
        // most draws exercise the full-encryption tier; a handful cover the
        // head+tail tier and the ten-chunk tier
        std::uint64_t len;
        if (i < 180)
            len = rng.uniform(6 * adv::kMB);
        else if (i < 195)
            len = 5 * adv::kMB + rng.uniform(10 * adv::kMB);
        else
            len = 100 * adv::kMB + 1 + rng.uniform(8 * adv::kMB);
        check_bytes(adv::ParadiseTiered{}, len, [len](std::uint64_t b) {
            const std::uint64_t chunk = 5 * adv::kMB / 2;
            if (len < 5 * adv::kMB) return true;
            if (len <= 100 * adv::kMB) return b < chunk || b >= len - chunk;
            for (std::uint64_t k = 0; k < 10; ++k) {
                std::uint64_t s = k * len / 10;
                if (b >= s && b - s < chunk) return true;
            }
            return false;
        });
        if (!c.ok) return c;
    }
    c.expect(seconds_since(start) < 10.0, "runtime >= 10s");
    return c;
}

Check criterion_5() {
    Check c;
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform01();
        auto n = static_cast<std::size_t>(std::pow(10.0, 0.7 + u * 5.3)); // 5 .. 1e6
        if (n < 4) n = 4;
        Bytes data = random_bytes(n, 500 + i);
        feat::RunningMoments rm;
        rm.ingest(data);
        // two-pass reference
        double mean = 0;
        for (std::uint8_t b : data) mean += b;
        mean /= static_cast<double>(n);
        double m2 = 0, m3 = 0, m4 = 0;
        for (std::uint8_t b : data) {
            double d = b - mean;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        double dn = static_cast<double>(n);
        double variance = m2 / dn;
        double g1 = std::sqrt(dn) * m3 / std::pow(m2, 1.5);
        double skew = g1 * std::sqrt(dn * (dn - 1.0)) / (dn - 2.0);
        double g2 = dn * m4 / (m2 * m2) - 3.0;
        double kurt = ((dn + 1.0) * g2 + 6.0) * (dn - 1.0) / ((dn - 2.0) * (dn - 3.0));

        auto rel = [](double a, double b) {
            return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
        };
        if (rel(rm.mean(), mean) > 1e-9 || rel(rm.variance(), variance) > 1e-9 ||
            rel(rm.skewness(), skew) > 1e-9 || rel(rm.kurtosis(), kurt) > 1e-9) {
            c.expect(false, "streaming/two-pass divergence at n=" + std::to_string(n));
            return c;
        }
    }
    feat::RunningMoments um;
    um.ingest(random_bytes(1 << 20, 55));
    c.expect(std::fabs(um.skewness()) <= 0.02,
             "uniform skewness " + std::to_string(um.skewness()));
    c.expect(std::fabs(um.kurtosis() + 1.20) <= 0.02,
             "uniform excess kurtosis " + std::to_string(um.kurtosis()));
    return c;
}

Check criterion_6() {
    Check c;
    adv::CipherConfig cfg = adv::CipherConfig::derive(6, "c6");
    feat::ByteHistogram h;
    h.ingest(adv::ctr_encrypt(cfg, Bytes(1 << 20, 0x00)));
    feat::Percentiles p = feat::percentiles(h);
    c.expect(std::abs(p.p25 - 64) <= 3, "p25 = " + std::to_string(p.p25));
    c.expect(std::abs(p.p50 - 128) <= 3, "p50 = " + std::to_string(p.p50));
    c.expect(std::abs(p.p75 - 192) <= 3, "p75 = " + std::to_string(p.p75));
    return c;
}

Check criterion_7() {
    Check c;
    // passive-aggressive: hinge loss annihilated whenever the step is unclipped
    Rng rng(7);
    ml::LinearModel pa(ml::LinearAlgo::Pa);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> x(3);
        for (auto& v : x) v = rng.uniform01() * 4.0 - 2.0;
        int label = rng.uniform(2) ? 1 : 0;
        double y = label ? 1.0 : -1.0;
        double norm2 = 0;
        for (double v : x) norm2 += v * v;
        double loss = std::max(0.0, 1.0 - y * pa.score(x));
        bool clipped = norm2 == 0.0 || loss / norm2 >= pa.pa_aggressiveness;
        pa.update(x, label);
        if (!clipped) {
            double post = std::max(0.0, 1.0 - y * pa.score(x));
            if (post > 1e-9) {
                c.expect(false, "post-update hinge loss " + std::to_string(post));
                break;
            }
        }
    }

    // perceptron: correct predictions leave the state bit-identical
    ml::LinearModel per(ml::LinearAlgo::Perceptron);
    per.update({1.0, 0.0}, 1);
    auto w = per.weights();
    double bias = per.bias();
    per.update({1.0, 0.0}, 1);
    c.expect(per.weights() == w && per.bias() == bias, "perceptron moved on a correct example");

    // first gradient step from the origin
    ml::LinearModel sgd(ml::LinearAlgo::Sgd);
    std::vector<double> x = {2.0, -1.0, 0.5};
    double alpha = sgd.current_learning_rate();
    sgd.update(x, 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        c.expect(std::fabs(sgd.weights()[i] - alpha * 0.5 * x[i]) <= 1e-12,
                 "sgd step mismatch at coordinate " + std::to_string(i));

    double eps = ml::hoeffding_bound(1.0, 1e-7, 200);
    c.expect(std::fabs(eps - 0.2007) <= 1e-4, "bound " + std::to_string(eps));
    return c;
}

Check criterion_8() {
    Check c;
    Rng rng(8);
    ml::HoeffdingTree tree;
    std::vector<std::pair<std::vector<double>, int>> stream;
    for (int i = 0; i < 1000; ++i) {
        int label = static_cast<int>(rng.uniform(2));
        stream.push_back(
            {{static_cast<double>(label), rng.uniform01(), rng.uniform01()}, label});
    }
    for (const auto& [x, y] : stream) tree.learn_one(x, y);
    auto [feature, threshold] = tree.root_split();
    c.expect(feature == 0, "root split on feature " + std::to_string(feature));
    int correct = 0;
    for (const auto& [x, y] : stream)
        if (tree.predict_one(x).first == y) ++correct;
    c.expect(correct == 1000,
             "post-split accuracy " + std::to_string(correct / 1000.0) + " != 1.0");
    (void)threshold;
    return c;
}

Check criterion_9(std::unique_ptr<ml::OnlineModel>& model_out) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    eval::PrequentialReport r = bench("hoeffding", "full", "full", 1, &model_out);
    c.expect(r.batches.size() == 10, "expected 10 batches of 200");
    for (std::size_t i = 3; i < r.batches.size(); ++i)
        c.expect(r.batches[i].accuracy >= 0.90,
                 "batch " + std::to_string(i) + " accuracy " +
                     std::to_string(r.batches[i].accuracy) + " < 0.90");
    c.expect(seconds_since(start) < 300.0, "runtime >= 5 min");
    c.detail << (c.ok ? "per-batch: " + fmt_batches(r) : "");
    return c;
}

Check criterion_10() {
    Check c;
    eval::PrequentialReport ht = bench("hoeffding", "aes-base64", "full", 1);
    for (std::size_t i = 3; i < ht.batches.size(); ++i)
        c.expect(ht.batches[i].accuracy >= 0.90,
                 "tree batch " + std::to_string(i) + " accuracy " +
                     std::to_string(ht.batches[i].accuracy) + " < 0.90");
    double ht_mean = ht.mean_accuracy();
    for (const char* linear : {"sgd", "perceptron", "pa"}) {
        double mean = bench(linear, "aes-base64", "full", 1).mean_accuracy();
        c.expect(ht_mean > mean, std::string("tree mean ") + std::to_string(ht_mean) +
                                     " not above " + linear + " mean " + std::to_string(mean));
    }
    return c;
}

Check criterion_11() {
    Check c;
    auto start = std::chrono::steady_clock::now();
    pipe::StreamSpec spec;
    spec.corpus = corpus::CorpusSpec::desk_scale(1);
    spec.mode = adv::BlackBasta{};
    spec.encrypted_fraction = 0.5;
    spec.stream_seed = 1 ^ 0x5e2712e1ULL;

    // (a) entropy alone cannot separate intermittent encryption in batch mode
    auto [X, y] = pipe::materialize_features(spec, feat::FeatureSetConfig::parse("entropy-only"));
    eval::BaselineReport baseline = eval::run_batch_baseline(X, y);
    c.expect(baseline.tree.accuracy <= 0.65,
             "entropy-only tree accuracy " + std::to_string(baseline.tree.accuracy));
    c.expect(baseline.forest.accuracy <= 0.65,
             "entropy-only forest accuracy " + std::to_string(baseline.forest.accuracy));

    // (b) the full feature set recovers it, and the warm-start forest leads
    eval::PrequentialReport forest = bench("forest", "blackbasta", "full", 1);
    eval::PrequentialReport ht = bench("hoeffding", "blackbasta", "full", 1);
    double fm = forest.mean_accuracy(2), hm = ht.mean_accuracy(2);
    c.expect(fm >= hm, "forest mean " + std::to_string(fm) + " below tree mean " +
                           std::to_string(hm));
    c.expect(fm >= 0.75, "forest mean " + std::to_string(fm) + " < 0.75");
    c.expect(seconds_since(start) < 600.0, "runtime >= 10 min");
    if (c.ok)
        c.detail << "baselines " << baseline.tree.accuracy << "/" << baseline.forest.accuracy
                 << ", forest mean " << fm << ", tree mean " << hm;
    return c;
}

Check criterion_12() {
    Check c;
    Rng rng(12);
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int i = 0; i < 10000; ++i) {
        int label = static_cast<int>(rng.uniform(2));
        std::vector<double> x(11);
        for (auto& v : x) v = rng.uniform01() + (label ? 0.3 : 0.0);
        X.push_back(std::move(x));
        y.push_back(label);
    }
    ml::HoeffdingTree online;
    eval::PhaseCost online_cost = eval::measure_cost([&] {
        for (std::size_t i = 0; i < X.size(); ++i) online.learn_one(X[i], y[i]);
    });
    ml::CartTree batch;
    eval::PhaseCost batch_cost = eval::measure_cost([&] { batch.fit(X, y); });
    double ratio = batch_cost.wall_seconds / std::max(online_cost.wall_seconds, 1e-9);
    c.expect(ratio > 2.0, "batch/online wall-clock ratio " + std::to_string(ratio) + " <= 2");
    if (c.ok)
        c.detail << "online " << online_cost.wall_seconds << "s, batch refit "
                 << batch_cost.wall_seconds << "s, ratio " << ratio << "x";
    return c;
}

Check criterion_13(const std::unique_ptr<ml::OnlineModel>& trained) {
    Check c;
    if (!trained) {
        c.expect(false, "no trained model available (criterion 9 must run first)");
        return c;
    }
    fs::path dir = fs::temp_directory_path() /
                   ("sentinel-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir / "watch");

    std::ofstream(dir / "model.json") << trained->serialize();
    guard::GuardConfig cfg;
    cfg.watch_roots = {dir / "watch"};
    cfg.model_path = dir / "model.json";
    cfg.feature_set = feat::FeatureSetConfig::parse("full");
    cfg.journal_path = dir / "journal.jsonl";
    guard::Guard g(cfg);

    auto samples = corpus::synth_corpus(mixed_spec(13, 13, 4096, 256 * 1024));
    samples.resize(100);
    std::vector<std::string> journal_lines;
    int plain_alerts = 0, enc_alerts = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        corpus::FileSample s = samples[i];
        bool encrypt = i % 2 == 1; // 50 plaintext, 50 fully encrypted
        if (encrypt)
            s = adv::apply_mode(s, adv::FullCipher{}, adv::CipherConfig::derive(13, s.id));
        fs::path file = dir / "watch" / (s.id + ".bin");
        std::ofstream(file, std::ios::binary)
            .write(reinterpret_cast<const char*>(s.bytes.data()),
                   static_cast<std::streamsize>(s.bytes.size()));
        auto record = g.process_file(file);
        if (!record) {
            c.expect(false, "failed to process " + file.string());
            continue;
        }
        journal_lines.push_back(record->to_json_line());
        if (record->alert) (encrypt ? enc_alerts : plain_alerts)++;
    }
    c.expect(enc_alerts >= 45,
             "only " + std::to_string(enc_alerts) + "/50 encrypted files alerted");
    c.expect(plain_alerts <= 5,
             std::to_string(plain_alerts) + "/50 plaintext files alerted");

    auto replay = guard::Guard::read_journal(cfg.journal_path);
    c.expect(replay.size() == journal_lines.size(), "journal length mismatch");
    for (std::size_t i = 0; i < replay.size() && i < journal_lines.size(); ++i)
        if (replay[i].to_json_line() != journal_lines[i]) {
            c.expect(false, "journal replay diverges at record " + std::to_string(i));
            break;
        }
    if (c.ok)
        c.detail << enc_alerts << "/50 true alerts, " << plain_alerts << "/50 false alerts";
    fs::remove_all(dir);
    return c;
}

int report(int index, const std::string& title, const Check& c) {
    std::cout << "criterion " << index << ": " << (c.ok ? "PASS" : "FAIL") << " - " << title;
    std::string detail = c.detail.str();
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    return c.ok ? 0 : 1;
}

} // namespace

int main() {
    int failures = 0;
    std::unique_ptr<ml::OnlineModel> benchmark_model;

    failures += report(1, "entropy endpoints", criterion_1());
    failures += report(2, "cipher-then-base64 entropy band", criterion_2());
    failures += report(3, "base64 size growth", criterion_3());
    failures += report(4, "mask fractions vs per-byte oracle", criterion_4());
    failures += report(5, "streaming moment equivalence", criterion_5());
    failures += report(6, "ciphertext percentiles", criterion_6());
    failures += report(7, "learner closed forms", criterion_7());
    failures += report(8, "tree split sanity", criterion_8());
    failures += report(9, "full-encryption benchmark", criterion_9(benchmark_model));
    failures += report(10, "base64-adversary benchmark", criterion_10());
    failures += report(11, "intermittent-encryption ordering", criterion_11());
    failures += report(12, "online vs batch refit cost", criterion_12());
    failures += report(13, "guard end-to-end", criterion_13(benchmark_model));

    if (failures > 0) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all 13 criteria passed" << std::endl;
    return 0;
}
