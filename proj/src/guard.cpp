#include "sentinel/guard.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/inotify.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace sentinel::guard {

using json = nlohmann::json;
namespace fs = std::filesystem;

GuardConfig GuardConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("guard config: ") + e.what());
    }
    GuardConfig c;
    if (!j.contains("watch_roots") || !j["watch_roots"].is_array() || j["watch_roots"].empty())
        throw ConfigError("guard config: watch_roots must be a non-empty array");
    for (const auto& r : j["watch_roots"]) c.watch_roots.emplace_back(r.get<std::string>());
    c.model_path = j.at("model").get<std::string>();
    c.feature_set = feat::FeatureSetConfig::parse(j.value("features", "full"));
    c.alert_threshold = j.value("threshold", 0.5);
    if (c.alert_threshold < 0.0 || c.alert_threshold > 1.0)
        throw ConfigError("guard config: threshold must be in [0,1]");
    std::string mode = j.value("learn_mode", "frozen");
    if (mode == "frozen") {
        c.frozen = true;
    } else if (mode == "feedback") {
        c.frozen = false;
    } else {
        throw ConfigError("guard config: learn_mode must be 'frozen' or 'feedback'");
    }
    c.journal_path = j.at("journal").get<std::string>();
    c.debounce = std::chrono::milliseconds(j.value("debounce_ms", 500));
    c.poll_interval = std::chrono::milliseconds(j.value("poll_interval_ms", 100));
    c.backend = j.value("backend", "auto");
    if (c.backend != "auto" && c.backend != "inotify" && c.backend != "poll")
        throw ConfigError("guard config: backend must be auto, inotify, or poll");
    c.sample_cap_bytes = j.value("sample_cap_bytes", 64ull << 20);
    c.sample_chunk_bytes = j.value("sample_chunk_bytes", 8ull << 20);
    return c;
}

GuardConfig GuardConfig::load(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("guard config: cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string GuardConfig::to_json_text() const {
    json roots = json::array();
    for (const auto& r : watch_roots) roots.push_back(r.string());
    json j{{"watch_roots", roots},
           {"model", model_path.string()},
           {"features", feature_set.name()},
           {"threshold", alert_threshold},
           {"learn_mode", frozen ? "frozen" : "feedback"},
           {"journal", journal_path.string()},
           {"debounce_ms", debounce.count()},
           {"poll_interval_ms", poll_interval.count()},
           {"backend", backend},
           {"sample_cap_bytes", sample_cap_bytes},
           {"sample_chunk_bytes", sample_chunk_bytes}};
    return j.dump(2);
}

std::string DecisionRecord::to_json_line() const {
    json j{{"schema", 1},
           {"type", "decision"},
           {"ts_ms", timestamp_ms},
           {"path", path},
           {"predicted", predicted},
           {"confidence", confidence},
           {"features", features},
           {"model_version", model_version},
           {"alert", alert}};
    return j.dump();
}

DecisionRecord DecisionRecord::from_json_line(const std::string& line) {
    json j = json::parse(line);
    DecisionRecord r;
    r.timestamp_ms = j.at("ts_ms").get<std::int64_t>();
    r.path = j.at("path").get<std::string>();
    r.predicted = j.at("predicted").get<int>();
    r.confidence = j.at("confidence").get<double>();
    r.features = j.at("features").get<std::vector<double>>();
    r.model_version = j.at("model_version").get<std::uint64_t>();
    r.alert = j.at("alert").get<bool>();
    return r;
}

Bytes read_for_extraction(const fs::path& path, std::size_t cap, std::size_t chunk) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("guard: cannot read " + path.string());
    in.seekg(0, std::ios::end);
    auto size = static_cast<std::size_t>(in.tellg());
    Bytes out;
    auto read_at = [&](std::size_t offset, std::size_t count) {
        std::size_t old = out.size();
        out.resize(old + count);
        in.seekg(static_cast<std::streamoff>(offset));
        in.read(reinterpret_cast<char*>(out.data() + old), static_cast<std::streamsize>(count));
        out.resize(old + static_cast<std::size_t>(in.gcount()));
        in.clear();
    };
    if (size <= cap || size <= 3 * chunk) {
        read_at(0, size);
    } else {
        read_at(0, chunk);
        read_at(size / 2 - chunk / 2, chunk);
        read_at(size - chunk, chunk);
    }
    return out;
}

Guard::Guard(GuardConfig config) : config_(std::move(config)) {
    for (const auto& root : config_.watch_roots)
        if (!fs::is_directory(root))
            throw ConfigError("guard: watch root is not a directory: " + root.string());
    std::ifstream in(config_.model_path, std::ios::binary);
    if (!in) throw ConfigError("guard: cannot read model " + config_.model_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    model_ = ml::OnlineModel::deserialize(buf.str());

    // fatal dimension check before watching anything
    std::vector<double> probe(feat::FeatureVector::names(config_.feature_set).size(), 0.0);
    try {
        model_->predict_one(probe);
    } catch (const std::exception&) {
        throw ConfigError("guard: model/feature dimension mismatch");
    }

    // rebuild feedback bookkeeping from an existing journal
    if (fs::exists(config_.journal_path)) {
        std::ifstream jin(config_.journal_path);
        std::string line;
        while (std::getline(jin, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            std::string type = j.value("type", "");
            if (type == "decision") {
                DecisionRecord r = DecisionRecord::from_json_line(line);
                model_version_ = std::max(model_version_, r.model_version);
                last_decision_[r.path] = std::move(r);
            } else if (type == "feedback") {
                feedback_done_.insert(j.at("path").get<std::string>());
                model_version_ = std::max(model_version_, j.at("model_version").get<std::uint64_t>());
            }
        }
    }

    journal_fd_ = ::open(config_.journal_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (journal_fd_ < 0)
        throw ConfigError("guard: cannot open journal " + config_.journal_path.string());
}

Guard::~Guard() {
    if (journal_fd_ >= 0) ::close(journal_fd_);
}

void Guard::journal_append(const std::string& line) {
    std::string buf = line + "\n";
    ssize_t n = ::write(journal_fd_, buf.data(), buf.size());
    if (n != static_cast<ssize_t>(buf.size()))
        throw UsageError("guard: journal write failed");
    ::fsync(journal_fd_);
}

std::optional<DecisionRecord> Guard::process_file(const fs::path& path) {
    Bytes bytes;
    try {
        bytes = read_for_extraction(path, config_.sample_cap_bytes, config_.sample_chunk_bytes);
    } catch (const std::exception&) {
        return std::nullopt; // transient read failure: logged by caller, skipped
    }
    feat::StreamingExtractor ex;
    ex.ingest(bytes);
    feat::FeatureVector fv = ex.finalize(config_.feature_set);

    DecisionRecord record;
    record.timestamp_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
    record.path = fs::absolute(path).lexically_normal().string();
    record.features = fv.values(config_.feature_set);
    auto [cls, conf] = model_->predict_one(record.features);
    record.predicted = cls;
    record.confidence = conf;
    record.model_version = model_version_;
    record.alert = cls == 1 && conf >= config_.alert_threshold;

    journal_append(record.to_json_line());
    last_decision_[record.path] = record;
    return record;
}

void Guard::feedback(const fs::path& path, int true_label) {
    if (config_.frozen) throw UsageError("guard: feedback rejected, model is frozen");
    if (true_label != 0 && true_label != 1)
        throw UsageError("guard: feedback label must be 0 or 1");
    std::string key = fs::absolute(path).lexically_normal().string();
    auto it = last_decision_.find(key);
    if (it == last_decision_.end())
        throw UsageError("guard: no journaled decision for " + key);
    if (!feedback_done_.insert(key).second)
        throw UsageError("guard: feedback for " + key + " already applied");

    model_->learn_one(it->second.features, true_label);
    ++model_version_;
    json j{{"schema", 1},
           {"type", "feedback"},
           {"ts_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count()},
           {"path", key},
           {"true_label", true_label},
           {"model_version", model_version_}};
    journal_append(j.dump());
}

void Guard::save_model() const {
    std::ofstream out(config_.model_path, std::ios::binary | std::ios::trunc);
    out << model_->serialize();
}

std::vector<DecisionRecord> Guard::read_journal(const fs::path& path) {
    std::vector<DecisionRecord> records;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.value("type", "") == "decision")
            records.push_back(DecisionRecord::from_json_line(line));
    }
    return records;
}

void Guard::flush_due(
    std::map<fs::path, std::chrono::steady_clock::time_point>& pending) {
    auto now = std::chrono::steady_clock::now();
    for (auto it = pending.begin(); it != pending.end();) {
        if (now - it->second >= config_.debounce) {
            if (fs::is_regular_file(it->first)) process_file(it->first);
            it = pending.erase(it);
        } else {
            ++it;
        }
    }
}

void Guard::run() {
    if (config_.backend == "poll") {
        run_poll();
        return;
    }
    int fd = ::inotify_init1(IN_NONBLOCK);
    if (fd < 0) {
        if (config_.backend == "inotify")
            throw ConfigError("guard: inotify unavailable");
        run_poll();
        return;
    }
    ::close(fd);
    run_inotify();
}

void Guard::run_inotify() {
    int fd = ::inotify_init1(IN_NONBLOCK);
    if (fd < 0) throw ConfigError("guard: inotify_init failed");
    std::map<int, fs::path> watches;
    auto add_watch = [&](const fs::path& dir) {
        int wd = ::inotify_add_watch(fd, dir.c_str(),
                                     IN_CLOSE_WRITE | IN_MOVED_TO | IN_CREATE);
        if (wd >= 0) watches[wd] = dir;
    };
    for (const auto& root : config_.watch_roots) {
        add_watch(root);
        for (auto it = fs::recursive_directory_iterator(root);
             it != fs::recursive_directory_iterator(); ++it)
            if (it->is_directory()) add_watch(it->path());
    }

    std::map<fs::path, std::chrono::steady_clock::time_point> pending;
    alignas(inotify_event) char buf[4096];
    while (!stop_.load()) {
        pollfd pfd{fd, POLLIN, 0};
        int timeout = static_cast<int>(config_.poll_interval.count());
        if (::poll(&pfd, 1, timeout) > 0) {
            ssize_t len;
            while ((len = ::read(fd, buf, sizeof buf)) > 0) {
                for (char* p = buf; p < buf + len;) {
                    auto* ev = reinterpret_cast<inotify_event*>(p);
                    auto wi = watches.find(ev->wd);
                    if (wi != watches.end() && ev->len > 0) {
                        fs::path full = wi->second / ev->name;
                        if (ev->mask & IN_CREATE) {
                            if (fs::is_directory(full)) add_watch(full);
                        } else {
                            pending[full] = std::chrono::steady_clock::now();
                        }
                    }
                    p += sizeof(inotify_event) + ev->len;
                }
            }
        }
        flush_due(pending);
    }
    flush_due(pending);
    ::close(fd);
}

void Guard::run_poll() {
    struct Seen {
        std::uintmax_t size;
        fs::file_time_type mtime;
    };
    std::map<fs::path, Seen> known;
    // baseline scan: pre-existing files are not "write events"
    for (const auto& root : config_.watch_roots)
        for (auto it = fs::recursive_directory_iterator(root);
             it != fs::recursive_directory_iterator(); ++it)
            if (it->is_regular_file())
                known[it->path()] = {it->file_size(), it->last_write_time()};

    std::map<fs::path, std::chrono::steady_clock::time_point> pending;
    while (!stop_.load()) {
        for (const auto& root : config_.watch_roots) {
            for (auto it = fs::recursive_directory_iterator(root);
                 it != fs::recursive_directory_iterator(); ++it) {
                if (!it->is_regular_file()) continue;
                Seen now{it->file_size(), it->last_write_time()};
                auto ki = known.find(it->path());
                if (ki == known.end() || ki->second.size != now.size ||
                    ki->second.mtime != now.mtime) {
                    known[it->path()] = now;
                    pending[it->path()] = std::chrono::steady_clock::now();
                }
            }
        }
        flush_due(pending);
        std::this_thread::sleep_for(config_.poll_interval);
    }
    flush_due(pending);
}

} // namespace sentinel::guard
