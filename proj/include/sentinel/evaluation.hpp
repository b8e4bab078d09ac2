#ifndef SENTINEL_EVALUATION_HPP
#define SENTINEL_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/features.hpp"
#include "sentinel/model.hpp"

namespace sentinel::eval {

// positive class = encrypted (1)
struct ConfusionMatrix {
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

    void add(int truth01, int predicted01);
    std::uint64_t total() const { return tp + tn + fp + fn; }
};

// Derived metrics; any division by zero yields 0 with the `undefined` flag set.
struct BatchMetrics {
    ConfusionMatrix cm;
    double accuracy = 0;
    double precision_encrypt = 0, recall_encrypt = 0;
    double precision_normal = 0, recall_normal = 0;
    double f1 = 0; // for the encrypted class
    bool undefined = false;

    static BatchMetrics from(const ConfusionMatrix& cm);
};

struct PhaseCost {
    double wall_seconds = 0;
    std::uint64_t peak_rss_bytes = 0;
};

// Wall-clock + peak RSS around a phase callable.
PhaseCost measure_cost(const std::function<void()>& phase);

struct PrequentialReport {
    std::uint64_t seed = 0;
    std::string adversary_mode;
    std::string feature_set;
    std::string model_name;
    std::size_t batch_size = 0;
    std::vector<BatchMetrics> batches;
    PhaseCost extract_cost;
    PhaseCost model_cost;

    // mean per-batch accuracy, optionally skipping cold-start batches
    double mean_accuracy(std::size_t skip = 0) const;

    std::string to_json_text() const;
    std::string to_csv_text() const; // per-batch rows
    static PrequentialReport from_json_text(const std::string& text);
};

struct LabeledVector {
    std::vector<double> x;
    int label = 0; // 0 normal, 1 encrypted
};

// Pull-based sample stream; returns nullopt when exhausted.
using SampleStream = std::function<std::optional<LabeledVector>()>;

// Test-then-train per batch: every sample of a batch is scored with the
// model as it stood before the batch, then the model trains on the batch.
// The final partial batch is evaluated the same way. Empty stream -> empty
// report.
PrequentialReport run_prequential(const SampleStream& stream, ml::OnlineModel& model,
                                  std::size_t batch_size = 1000);

// 70/30 batch baseline: CART tree and a bagged forest fitted on the head
// split, scored on the tail. Throws UsageError when the corpus is
// single-class.
struct BaselineReport {
    BatchMetrics tree;
    BatchMetrics forest;
    std::string to_json_text() const;
};

BaselineReport run_batch_baseline(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y, double split = 0.7,
                                  std::uint64_t seed = 0);

// Aligned per-batch accuracy table over several runs, with per-model means
// both including and excluding the two cold-start batches. Throws
// UsageError on an empty list or mismatched batch counts.
struct Comparison {
    std::vector<std::string> models;
    std::vector<std::vector<double>> accuracy; // [batch][model]
    std::vector<double> mean_all;              // [model]
    std::vector<double> mean_warm;             // [model], batches >= 2
    std::string to_csv_text() const;
    std::string to_json_text() const;
};

Comparison compare_models(const std::vector<PrequentialReport>& reports);

} // namespace sentinel::eval

#endif
