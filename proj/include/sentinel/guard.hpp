#ifndef SENTINEL_GUARD_HPP
#define SENTINEL_GUARD_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sentinel/evaluation.hpp"
#include "sentinel/features.hpp"
#include "sentinel/model.hpp"

namespace sentinel::guard {

struct GuardConfig {
    std::vector<std::filesystem::path> watch_roots;
    std::filesystem::path model_path;     // serialized OnlineModel
    feat::FeatureSetConfig feature_set;   // must match the model's input
    double alert_threshold = 0.5;         // in [0,1]
    bool frozen = true;                   // frozen vs self-train-on-feedback
    std::filesystem::path journal_path;
    // watcher tuning
    std::chrono::milliseconds debounce{500};
    std::chrono::milliseconds poll_interval{100};
    std::string backend = "auto"; // auto | inotify | poll
    std::size_t sample_cap_bytes = 64ull << 20;   // larger files are sampled
    std::size_t sample_chunk_bytes = 8ull << 20;  // head + midpoint + tail

    static GuardConfig from_json_text(const std::string& text);
    static GuardConfig load(const std::filesystem::path& path);
    std::string to_json_text() const;
};

struct DecisionRecord {
    std::int64_t timestamp_ms = 0;
    std::string path;
    int predicted = 0; // 0 normal, 1 encrypted
    double confidence = 0;
    std::vector<double> features;
    std::uint64_t model_version = 0;
    bool alert = false;

    std::string to_json_line() const;
    static DecisionRecord from_json_line(const std::string& line);
};

// Directory-watch guard: classifies observed file writes with a live online
// model and journals every decision (alerts are decisions that crossed the
// threshold). Single event loop; inotify when available, polling otherwise.
class Guard {
public:
    explicit Guard(GuardConfig config);
    ~Guard();

    const GuardConfig& config() const { return config_; }
    const ml::OnlineModel& model() const { return *model_; }
    std::uint64_t model_version() const { return model_version_; }

    // classify one file now (the same path the watcher takes per event);
    // nullopt when the file vanished or could not be read
    std::optional<DecisionRecord> process_file(const std::filesystem::path& path);

    // run the event loop until stop() is called (from another thread or a
    // signal handler); flushes the journal on exit
    void run();
    void stop() { stop_.store(true); }

    // feed the journaled snapshot for `path` back with its true label;
    // throws UsageError in frozen mode, for unknown paths, and for repeats
    void feedback(const std::filesystem::path& path, int true_label);

    // serialized model bytes as they stand now
    std::string model_snapshot() const { return model_->serialize(); }
    void save_model() const;

    static std::vector<DecisionRecord> read_journal(const std::filesystem::path& path);

private:
    void journal_append(const std::string& line);
    void handle_event(const std::filesystem::path& path);
    void flush_due(std::map<std::filesystem::path, std::chrono::steady_clock::time_point>& pending);
    void run_inotify();
    void run_poll();

    GuardConfig config_;
    std::unique_ptr<ml::OnlineModel> model_;
    std::uint64_t model_version_ = 1;
    std::atomic<bool> stop_{false};
    // feedback bookkeeping: latest snapshot per path, and paths already fed back
    std::map<std::string, DecisionRecord> last_decision_;
    std::set<std::string> feedback_done_;
    int journal_fd_ = -1;
};

// Read a file for classification, sampling head/midpoint/tail chunks when it
// exceeds `cap` bytes. Exposed for tests.
Bytes read_for_extraction(const std::filesystem::path& path, std::size_t cap,
                          std::size_t chunk);

} // namespace sentinel::guard

#endif
