// sentinel: corpus synthesis, adversarial encryption, feature extraction,
// online training, prequential benchmarks, and the directory-watch guard.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sentinel/adversary.hpp"
#include "sentinel/corpus.hpp"
#include "sentinel/evaluation.hpp"
#include "sentinel/features.hpp"
#include "sentinel/guard.hpp"
#include "sentinel/model.hpp"
#include "sentinel/pipeline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace sentinel;

namespace {

constexpr const char* kVersion = "0.1.0";

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("SENTINEL_LOG");
    if (!env) return LogLevel::Info;
    std::string v = env;
    if (v == "quiet" || v == "0") return LogLevel::Quiet;
    if (v == "debug" || v == "2") return LogLevel::Debug;
    return LogLevel::Info;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "sentinel: " << msg << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Every pipeline output directory gets exactly one manifest sufficient to
// re-run the command.
void write_manifest(const fs::path& out_dir, int argc, char** argv, const json& resolved) {
    json argv_json = json::array();
    for (int i = 0; i < argc; ++i) argv_json.push_back(argv[i]);
    json j{{"tool", "sentinel"},
           {"version", kVersion},
           {"argv", argv_json},
           {"config", resolved}};
    write_text(out_dir / "manifest.json", j.dump(2) + "\n");
}

feat::FeatureSetConfig parse_features(const std::string& name, bool with_size) {
    feat::FeatureSetConfig cfg = feat::FeatureSetConfig::parse(name);
    cfg.include_file_size = with_size;
    return cfg;
}

corpus::CorpusSpec load_or_default_spec(const std::string& spec_path, std::uint64_t seed,
                                        std::size_t files) {
    corpus::CorpusSpec spec;
    if (!spec_path.empty()) {
        spec = corpus::CorpusSpec::from_json_text(read_text(spec_path));
        spec.seed = seed;
        return spec;
    }
    spec = corpus::CorpusSpec::desk_scale(seed);
    if (files > 0) {
        // scale the desk mix to the requested total
        std::size_t base = 0;
        for (const auto& [kind, count] : spec.counts) base += count;
        std::map<corpus::FileKind, std::size_t> scaled;
        std::size_t assigned = 0;
        for (const auto& [kind, count] : spec.counts) {
            std::size_t c = std::max<std::size_t>(1, count * files / base);
            scaled[kind] = c;
            assigned += c;
        }
        // settle rounding on the largest bucket
        auto largest = std::max_element(scaled.begin(), scaled.end(),
                                        [](auto& a, auto& b) { return a.second < b.second; });
        largest->second += files > assigned ? files - assigned : 0;
        while (assigned > files && largest->second > 1) {
            --largest->second;
            --assigned;
        }
        spec.counts = scaled;
    }
    return spec;
}

int cmd_corpus(int argc, char** argv, const std::string& spec_path, std::uint64_t seed,
               std::size_t files, const std::string& out_dir) {
    corpus::CorpusSpec spec = load_or_default_spec(spec_path, seed, files);
    corpus::SyntheticCorpus cx(spec);
    fs::path out(out_dir);
    fs::create_directories(out / "files");
    json index = json::array();
    for (std::size_t i = 0; i < cx.size(); ++i) {
        corpus::FileSample s = cx.make(i);
        fs::path file = out / "files" / s.id;
        std::ofstream f(file, std::ios::binary);
        f.write(reinterpret_cast<const char*>(s.bytes.data()),
                static_cast<std::streamsize>(s.bytes.size()));
        index.push_back({{"id", s.id},
                         {"kind", corpus::kind_name(s.kind)},
                         {"size", s.bytes.size()}});
    }
    write_text(out / "index.json", index.dump(2) + "\n");
    write_manifest(out, argc, argv, json::parse(spec.to_json_text()));
    log_info("wrote " + std::to_string(cx.size()) + " files to " + out_dir);
    return 0;
}

int cmd_encrypt(int argc, char** argv, const std::string& in_path, const std::string& out_dir,
                const std::string& mode_text, std::uint64_t seed) {
    adv::AdversaryMode mode = adv::parse_mode(mode_text);
    fs::path out(out_dir);
    fs::create_directories(out);
    corpus::IngestResult ingest = corpus::load_directory(in_path, true, corpus::Label::Normal);
    for (const auto& w : ingest.warnings) log_info("skip " + w.path.string() + ": " + w.message);
    json index = json::array();
    for (const auto& sample : ingest.samples) {
        auto cipher = adv::CipherConfig::derive(seed, sample.id);
        corpus::FileSample enc = adv::apply_mode(sample, mode, cipher);
        fs::path file = out / sample.id;
        fs::create_directories(file.parent_path());
        std::ofstream f(file, std::ios::binary);
        f.write(reinterpret_cast<const char*>(enc.bytes.data()),
                static_cast<std::streamsize>(enc.bytes.size()));
        index.push_back({{"id", sample.id},
                         {"mode", enc.adversary_mode},
                         {"in_size", sample.bytes.size()},
                         {"out_size", enc.bytes.size()}});
    }
    write_text(out / "index.json", index.dump(2) + "\n");
    write_manifest(out, argc, argv,
                   json{{"mode", adv::mode_name(mode)}, {"seed", seed}, {"input", in_path}});
    log_info("encrypted " + std::to_string(ingest.samples.size()) + " files");
    return 0;
}

int cmd_extract(int argc, char** argv, const std::string& in_path, const std::string& out_dir,
                const std::string& features, bool with_size) {
    feat::FeatureSetConfig cfg = parse_features(features, with_size);
    corpus::IngestResult ingest = corpus::load_directory(in_path, true);
    for (const auto& w : ingest.warnings) log_info("skip " + w.path.string() + ": " + w.message);
    fs::path out(out_dir);
    fs::create_directories(out);

    std::ostringstream csv;
    csv << "id";
    for (const auto& n : feat::FeatureVector::names(cfg)) csv << ',' << n;
    csv << '\n';
    json rows = json::array();
    for (const auto& sample : ingest.samples) {
        feat::FeatureVector fv = feat::extract(sample, cfg);
        std::vector<double> vals = fv.values(cfg);
        csv << sample.id;
        for (double v : vals) csv << ',' << v;
        csv << '\n';
        json row{{"id", sample.id}, {"degenerate", fv.degenerate}};
        auto names = feat::FeatureVector::names(cfg);
        for (std::size_t i = 0; i < names.size(); ++i) row[names[i]] = vals[i];
        rows.push_back(std::move(row));
    }
    write_text(out / "features.csv", csv.str());
    write_text(out / "features.json", rows.dump(2) + "\n");
    write_manifest(out, argc, argv, json{{"features", cfg.name()}, {"input", in_path}});
    log_info("extracted " + std::to_string(ingest.samples.size()) + " feature vectors");
    return 0;
}

pipe::StreamSpec make_stream_spec(const std::string& spec_path, std::uint64_t seed,
                                  std::size_t files, const std::string& mode_text,
                                  double fraction) {
    pipe::StreamSpec spec;
    spec.corpus = load_or_default_spec(spec_path, seed, files);
    spec.mode = adv::parse_mode(mode_text);
    adv::validate_mode(spec.mode);
    spec.encrypted_fraction = fraction;
    spec.stream_seed = seed ^ 0x5e2712e1ULL;
    return spec;
}

int cmd_train(int argc, char** argv, const std::string& spec_path, std::uint64_t seed,
              std::size_t files, const std::string& mode_text, double fraction,
              const std::string& model_name, const std::string& features, bool with_size,
              std::size_t batch_size, const std::string& out_dir) {
    feat::FeatureSetConfig cfg = parse_features(features, with_size);
    pipe::StreamSpec spec = make_stream_spec(spec_path, seed, files, mode_text, fraction);
    auto model = ml::OnlineModel::create(model_name, seed);
    eval::PrequentialReport report =
        eval::run_prequential(pipe::make_stream(spec, cfg), *model, batch_size);
    report.seed = seed;
    report.adversary_mode = adv::mode_name(spec.mode);
    report.feature_set = cfg.name();

    fs::path out(out_dir);
    fs::create_directories(out);
    write_text(out / "model.json", model->serialize() + "\n");
    write_text(out / "report.json", report.to_json_text() + "\n");
    write_manifest(out, argc, argv,
                   json{{"model", model_name},
                        {"features", cfg.name()},
                        {"mode", report.adversary_mode},
                        {"seed", seed},
                        {"batch_size", batch_size},
                        {"corpus", json::parse(spec.corpus.to_json_text())}});
    log_info("trained " + model_name + " on " + report.adversary_mode + "; final accuracy " +
             std::to_string(report.batches.empty() ? 0.0 : report.batches.back().accuracy));
    return 0;
}

int cmd_bench(int argc, char** argv, const std::string& spec_path, std::uint64_t seed,
              std::size_t files, const std::string& mode_text, double fraction,
              const std::string& model_name, const std::string& features, bool with_size,
              std::size_t batch_size, const std::string& out_dir) {
    feat::FeatureSetConfig cfg = parse_features(features, with_size);
    pipe::StreamSpec spec = make_stream_spec(spec_path, seed, files, mode_text, fraction);
    auto model = ml::OnlineModel::create(model_name, seed);

    eval::PrequentialReport report;
    eval::PhaseCost extract_cost = eval::measure_cost([&] {
        report = eval::run_prequential(pipe::make_stream(spec, cfg), *model, batch_size);
    });
    report.extract_cost = extract_cost; // extraction happens inside the stream
    report.seed = seed;
    report.adversary_mode = adv::mode_name(spec.mode);
    report.feature_set = cfg.name();

    fs::path out(out_dir);
    fs::create_directories(out);
    write_text(out / "report.json", report.to_json_text() + "\n");
    write_text(out / "report.csv", report.to_csv_text());
    write_manifest(out, argc, argv,
                   json{{"model", model_name},
                        {"features", cfg.name()},
                        {"mode", report.adversary_mode},
                        {"seed", seed},
                        {"batch_size", batch_size},
                        {"corpus", json::parse(spec.corpus.to_json_text())}});
    log_info("bench " + model_name + " on " + report.adversary_mode + ": mean accuracy " +
             std::to_string(report.mean_accuracy(0)) + " (warm " +
             std::to_string(report.mean_accuracy(2)) + ")");
    return 0;
}

int cmd_compare(int argc, char** argv, const std::vector<std::string>& report_paths,
                const std::string& out_dir) {
    std::vector<eval::PrequentialReport> reports;
    for (const auto& p : report_paths)
        reports.push_back(eval::PrequentialReport::from_json_text(read_text(p)));
    eval::Comparison cmp = eval::compare_models(reports);
    fs::path out(out_dir);
    fs::create_directories(out);
    write_text(out / "comparison.csv", cmp.to_csv_text());
    write_text(out / "comparison.json", cmp.to_json_text() + "\n");
    write_manifest(out, argc, argv, json{{"reports", report_paths}});
    log_info("compared " + std::to_string(reports.size()) + " reports");
    return 0;
}

std::atomic<guard::Guard*> g_guard{nullptr};

void handle_signal(int) {
    if (auto* g = g_guard.load()) g->stop();
}

int cmd_guard(const std::string& config_path) {
    guard::GuardConfig config = guard::GuardConfig::load(config_path);
    guard::Guard guard(std::move(config));
    g_guard.store(&guard);
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    log_info("guard watching " + std::to_string(guard.config().watch_roots.size()) +
             " root(s); journal " + guard.config().journal_path.string());
    guard.run();
    if (!guard.config().frozen) guard.save_model();
    g_guard.store(nullptr);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"byte-statistics ransomware-encryption detector"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string spec_path, mode_text = "full", model_name = "hoeffding";
    std::string features = "full", out_dir = "out", in_path, config_path;
    std::vector<std::string> report_paths;
    std::uint64_t seed = 0;
    std::size_t files = 0, batch_size = 1000;
    double fraction = 0.5;
    bool with_size = false;

    auto* corpus_cmd = app.add_subcommand("corpus", "synthesize a seeded corpus");
    corpus_cmd->add_option("--spec", spec_path, "corpus spec JSON (overrides defaults)");
    corpus_cmd->add_option("--seed", seed, "corpus seed")->required();
    corpus_cmd->add_option("--files", files, "total file count (default desk-scale mix)");
    corpus_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* encrypt_cmd = app.add_subcommand("encrypt", "apply an adversary mode to a directory");
    encrypt_cmd->add_option("--in", in_path, "input directory")->required();
    encrypt_cmd->add_option("--adversary", mode_text, "mode, e.g. full, blackbasta, skipstep:1,2")
        ->required();
    encrypt_cmd->add_option("--seed", seed, "cipher key seed")->required();
    encrypt_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* extract_cmd = app.add_subcommand("extract", "extract feature vectors from a directory");
    extract_cmd->add_option("--in", in_path, "input directory")->required();
    extract_cmd->add_option("--features", features, "entropy-only | full | full+de");
    extract_cmd->add_flag("--with-file-size", with_size, "append file size as a feature");
    extract_cmd->add_option("--out", out_dir, "output directory")->required();

    auto add_pipeline_opts = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "corpus spec JSON (overrides defaults)");
        cmd->add_option("--seed", seed, "pipeline seed")->required();
        cmd->add_option("--files", files, "total file count");
        cmd->add_option("--adversary", mode_text, "adversary mode (default full)");
        cmd->add_option("--encrypted-fraction", fraction, "fraction of encrypted samples");
        cmd->add_option("--model", model_name, "sgd | perceptron | pa | hoeffding | forest");
        cmd->add_option("--features", features, "entropy-only | full | full+de");
        cmd->add_flag("--with-file-size", with_size, "append file size as a feature");
        cmd->add_option("--batch-size", batch_size, "prequential batch size");
        cmd->add_option("--out", out_dir, "output directory")->required();
    };
    auto* train_cmd = app.add_subcommand("train", "train an online model, save it with its report");
    add_pipeline_opts(train_cmd);
    auto* bench_cmd = app.add_subcommand("bench", "prequential benchmark");
    add_pipeline_opts(bench_cmd);

    auto* compare_cmd = app.add_subcommand("compare", "align prequential reports");
    compare_cmd->add_option("--report", report_paths, "report.json paths")->required();
    compare_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* guard_cmd = app.add_subcommand("guard", "watch directories with a trained model");
    guard_cmd->add_option("--config", config_path, "guard config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (corpus_cmd->parsed()) return cmd_corpus(argc, argv, spec_path, seed, files, out_dir);
        if (encrypt_cmd->parsed()) return cmd_encrypt(argc, argv, in_path, out_dir, mode_text, seed);
        if (extract_cmd->parsed())
            return cmd_extract(argc, argv, in_path, out_dir, features, with_size);
        if (train_cmd->parsed())
            return cmd_train(argc, argv, spec_path, seed, files, mode_text, fraction, model_name,
                             features, with_size, batch_size, out_dir);
        if (bench_cmd->parsed())
            return cmd_bench(argc, argv, spec_path, seed, files, mode_text, fraction, model_name,
                             features, with_size, batch_size, out_dir);
        if (compare_cmd->parsed()) return cmd_compare(argc, argv, report_paths, out_dir);
        if (guard_cmd->parsed()) return cmd_guard(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "sentinel: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sentinel: error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
