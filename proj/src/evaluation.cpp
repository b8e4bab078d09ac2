#include "sentinel/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <sys/resource.h>

#include <nlohmann/json.hpp>

namespace sentinel::eval {

using json = nlohmann::json;

void ConfusionMatrix::add(int truth01, int predicted01) {
    if (truth01) {
        predicted01 ? ++tp : ++fn;
    } else {
        predicted01 ? ++fp : ++tn;
    }
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, bool& undefined) {
    if (den == 0) {
        undefined = true;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

std::uint64_t peak_rss_bytes() {
    rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    // ru_maxrss is kilobytes on Linux
    return static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;
}

json metrics_to_json(const BatchMetrics& m) {
    return json{{"tp", m.cm.tp},
                {"tn", m.cm.tn},
                {"fp", m.cm.fp},
                {"fn", m.cm.fn},
                {"accuracy", m.accuracy},
                {"precision_encrypt", m.precision_encrypt},
                {"recall_encrypt", m.recall_encrypt},
                {"precision_normal", m.precision_normal},
                {"recall_normal", m.recall_normal},
                {"f1", m.f1},
                {"undefined", m.undefined}};
}

BatchMetrics metrics_from_json(const json& j) {
    ConfusionMatrix cm;
    cm.tp = j.at("tp").get<std::uint64_t>();
    cm.tn = j.at("tn").get<std::uint64_t>();
    cm.fp = j.at("fp").get<std::uint64_t>();
    cm.fn = j.at("fn").get<std::uint64_t>();
    return BatchMetrics::from(cm);
}

} // namespace

BatchMetrics BatchMetrics::from(const ConfusionMatrix& cm) {
    BatchMetrics m;
    m.cm = cm;
    m.accuracy = ratio(cm.tp + cm.tn, cm.total(), m.undefined);
    m.precision_encrypt = ratio(cm.tp, cm.tp + cm.fp, m.undefined);
    m.recall_encrypt = ratio(cm.tp, cm.tp + cm.fn, m.undefined);
    m.precision_normal = ratio(cm.tn, cm.tn + cm.fn, m.undefined);
    m.recall_normal = ratio(cm.tn, cm.tn + cm.fp, m.undefined);
    double denom = m.precision_encrypt + m.recall_encrypt;
    if (denom <= 0.0) {
        m.undefined = true;
        m.f1 = 0.0;
    } else {
        m.f1 = 2.0 * m.precision_encrypt * m.recall_encrypt / denom;
    }
    return m;
}

PhaseCost measure_cost(const std::function<void()>& phase) {
    auto start = std::chrono::steady_clock::now();
    phase();
    auto stop = std::chrono::steady_clock::now();
    PhaseCost cost;
    cost.wall_seconds = std::chrono::duration<double>(stop - start).count();
    cost.peak_rss_bytes = peak_rss_bytes();
    return cost;
}

double PrequentialReport::mean_accuracy(std::size_t skip) const {
    if (batches.size() <= skip) return 0.0;
    double sum = 0.0;
    for (std::size_t i = skip; i < batches.size(); ++i) sum += batches[i].accuracy;
    return sum / static_cast<double>(batches.size() - skip);
}

std::string PrequentialReport::to_json_text() const {
    json arr = json::array();
    for (const auto& b : batches) arr.push_back(metrics_to_json(b));
    json j{{"seed", seed},
           {"adversary_mode", adversary_mode},
           {"feature_set", feature_set},
           {"model", model_name},
           {"batch_size", batch_size},
           {"batches", arr},
           {"cost",
            json{{"extract_seconds", extract_cost.wall_seconds},
                 {"extract_peak_rss", extract_cost.peak_rss_bytes},
                 {"model_seconds", model_cost.wall_seconds},
                 {"model_peak_rss", model_cost.peak_rss_bytes}}}};
    return j.dump(2);
}

std::string PrequentialReport::to_csv_text() const {
    std::ostringstream out;
    out << "batch,model,accuracy,precision_normal,precision_encrypt,"
           "recall_normal,recall_encrypt,f1\n";
    for (std::size_t i = 0; i < batches.size(); ++i) {
        const auto& b = batches[i];
        out << i << ',' << model_name << ',' << b.accuracy << ',' << b.precision_normal << ','
            << b.precision_encrypt << ',' << b.recall_normal << ',' << b.recall_encrypt << ','
            << b.f1 << '\n';
    }
    return out.str();
}

PrequentialReport PrequentialReport::from_json_text(const std::string& text) {
    json j = json::parse(text);
    PrequentialReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.adversary_mode = j.at("adversary_mode").get<std::string>();
    r.feature_set = j.at("feature_set").get<std::string>();
    r.model_name = j.at("model").get<std::string>();
    r.batch_size = j.at("batch_size").get<std::size_t>();
    for (const auto& b : j.at("batches")) r.batches.push_back(metrics_from_json(b));
    if (j.contains("cost")) {
        const json& c = j.at("cost");
        r.extract_cost = {c.value("extract_seconds", 0.0), c.value("extract_peak_rss", 0ULL)};
        r.model_cost = {c.value("model_seconds", 0.0), c.value("model_peak_rss", 0ULL)};
    }
    return r;
}

PrequentialReport run_prequential(const SampleStream& stream, ml::OnlineModel& model,
                                  std::size_t batch_size) {
    if (batch_size < 1) throw UsageError("prequential: batch_size must be >= 1");
    PrequentialReport report;
    report.model_name = model.name();
    report.batch_size = batch_size;

    auto start = std::chrono::steady_clock::now();
    std::vector<LabeledVector> batch;
    batch.reserve(batch_size);
    bool exhausted = false;
    while (!exhausted) {
        batch.clear();
        while (batch.size() < batch_size) {
            auto sample = stream();
            if (!sample) {
                exhausted = true;
                break;
            }
            batch.push_back(std::move(*sample));
        }
        if (batch.empty()) break;
        // score the whole batch first ...
        ConfusionMatrix cm;
        for (const auto& s : batch) cm.add(s.label, model.predict_one(s.x).first);
        report.batches.push_back(BatchMetrics::from(cm));
        // ... then train on it
        for (const auto& s : batch) model.learn_one(s.x, s.label);
        model.end_batch();
    }
    auto stop = std::chrono::steady_clock::now();
    report.model_cost.wall_seconds = std::chrono::duration<double>(stop - start).count();
    report.model_cost.peak_rss_bytes = peak_rss_bytes();
    return report;
}

std::string BaselineReport::to_json_text() const {
    json j{{"tree", metrics_to_json(tree)}, {"forest", metrics_to_json(forest)}};
    return j.dump(2);
}

BaselineReport run_batch_baseline(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y, double split, std::uint64_t seed) {
    if (X.size() != y.size() || X.empty())
        throw UsageError("baseline: empty or mismatched corpus");
    if (split <= 0.0 || split >= 1.0) throw UsageError("baseline: split must be in (0,1)");
    bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
    bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
    if (!has0 || !has1) throw UsageError("baseline: corpus must contain both classes");

    auto cut = static_cast<std::size_t>(static_cast<double>(X.size()) * split);
    cut = std::clamp<std::size_t>(cut, 1, X.size() - 1);
    std::vector<std::vector<double>> train_x(X.begin(), X.begin() + static_cast<std::ptrdiff_t>(cut));
    std::vector<int> train_y(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(cut));
    bool t0 = std::find(train_y.begin(), train_y.end(), 0) != train_y.end();
    bool t1 = std::find(train_y.begin(), train_y.end(), 1) != train_y.end();
    if (!t0 || !t1) throw UsageError("baseline: training split must contain both classes");

    ml::CartTree tree;
    tree.fit(train_x, train_y, {12, 1});
    ml::WarmStartForest forest({10, 12, seed});
    forest.fit_batch(train_x, train_y);

    ConfusionMatrix tree_cm, forest_cm;
    for (std::size_t i = cut; i < X.size(); ++i) {
        tree_cm.add(y[i], tree.predict(X[i]));
        forest_cm.add(y[i], forest.predict(X[i]));
    }
    BaselineReport report;
    report.tree = BatchMetrics::from(tree_cm);
    report.forest = BatchMetrics::from(forest_cm);
    return report;
}

std::string Comparison::to_csv_text() const {
    std::ostringstream out;
    out << "batch";
    for (const auto& m : models) out << ',' << m;
    out << '\n';
    for (std::size_t b = 0; b < accuracy.size(); ++b) {
        out << b;
        for (double v : accuracy[b]) out << ',' << v;
        out << '\n';
    }
    out << "mean_all";
    for (double v : mean_all) out << ',' << v;
    out << "\nmean_warm";
    for (double v : mean_warm) out << ',' << v;
    out << '\n';
    return out.str();
}

std::string Comparison::to_json_text() const {
    json j{{"models", models},
           {"accuracy", accuracy},
           {"mean_all", mean_all},
           {"mean_warm", mean_warm}};
    return j.dump(2);
}

Comparison compare_models(const std::vector<PrequentialReport>& reports) {
    if (reports.empty()) throw UsageError("compare: no reports given");
    std::size_t batches = reports.front().batches.size();
    for (const auto& r : reports)
        if (r.batches.size() != batches)
            throw UsageError("compare: reports have mismatched batch counts");

    Comparison c;
    for (const auto& r : reports) c.models.push_back(r.model_name);
    c.accuracy.assign(batches, std::vector<double>(reports.size(), 0.0));
    for (std::size_t b = 0; b < batches; ++b)
        for (std::size_t m = 0; m < reports.size(); ++m)
            c.accuracy[b][m] = reports[m].batches[b].accuracy;
    for (const auto& r : reports) {
        c.mean_all.push_back(r.mean_accuracy(0));
        c.mean_warm.push_back(r.mean_accuracy(2));
    }
    return c;
}

} // namespace sentinel::eval
