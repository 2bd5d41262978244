#include "structid/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "structid/errors.hpp"

namespace structid {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FixtureError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> model_files;
    for (const auto& item : std::filesystem::directory_iterator(dir))
        if (item.is_regular_file() && item.path().extension() == ".sian-model")
            model_files.push_back(item.path());
    std::sort(model_files.begin(), model_files.end());

    std::vector<CorpusEntry> entries;
    for (const auto& file : model_files) {
        CorpusEntry entry;
        entry.model_file = file;
        entry.name = file.stem().string();
        std::filesystem::path fixture = file;
        fixture.replace_extension(".expected.json");
        if (!std::filesystem::exists(fixture))
            throw FixtureError("missing expected-label fixture for entry '" + entry.name + "'");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_file(fixture));
        } catch (const nlohmann::json::exception& e) {
            throw FixtureError("fixture for entry '" + entry.name + "' is not valid JSON: " + e.what());
        }
        try {
            entry.timing_class = doc.at("class").get<std::string>();
            entry.provenance = doc.value("provenance", std::string{});
            for (const auto& [key, value] : doc.at("labels").items())
                entry.expected[key] = label_from_token(value.get<std::string>());
        } catch (const std::exception& e) {
            throw FixtureError("fixture for entry '" + entry.name + "' is malformed: " + e.what());
        }
        if (entry.timing_class != "fast" && entry.timing_class != "medium" &&
            entry.timing_class != "stretch")
            throw FixtureError("fixture for entry '" + entry.name + "' has unknown class '" +
                               entry.timing_class + "'");
        if (entry.expected.empty())
            throw FixtureError("fixture for entry '" + entry.name + "' lists no labels");
        entries.push_back(std::move(entry));
    }
    return entries;
}

RunReport run_benchmarks(const std::filesystem::path& corpus, const BenchOptions& options) {
    RunReport run;
    run.corpus = corpus;
    run.options = options;

    std::vector<CorpusEntry> all = load_corpus(corpus);
    for (auto& entry : all) {
        if (!options.classes.count(entry.timing_class)) continue;
        EntryResult result;
        result.entry = std::move(entry);
        run.entries.push_back(std::move(result));
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= run.entries.size()) return;
            EntryResult& result = run.entries[idx];
            auto t0 = std::chrono::steady_clock::now();
            try {
                ParseResult parsed = parse_model(read_file(result.entry.model_file));
                result.parse_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                if (!parsed.model) {
                    std::string msg = "parse error";
                    for (const auto& d : parsed.diagnostics.items)
                        if (d.severity == Severity::Error) msg += "; " + d.message;
                    result.error = msg;
                    continue;
                }
                const Model& model = *parsed.model;

                // Fixture completeness: expected labels must cover exactly
                // the model's unknowns.
                std::vector<std::string> unknowns = model.unknown_names();
                std::set<std::string> unknown_set(unknowns.begin(), unknowns.end());
                std::set<std::string> fixture_set;
                for (const auto& [name, label] : result.entry.expected) fixture_set.insert(name);
                if (unknown_set != fixture_set) {
                    result.error = "fixture for entry '" + result.entry.name +
                                   "' does not cover exactly the model's unknowns";
                    continue;
                }

                AnalysisOptions opts;
                opts.probability = options.probability;
                opts.seed = options.seed;
                opts.max_order = options.max_order;
                opts.groebner = options.groebner;
                result.report = global_classification(model, opts);

                result.passed = true;
                for (const auto& [name, expected] : result.entry.expected) {
                    Label got = result.report.label_of(name);
                    if (got == expected) {
                        result.status[name] = "match";
                    } else if (got == Label::Unresolved) {
                        result.status[name] = "unresolved";
                        result.unresolved = true;
                        result.passed = false;
                    } else {
                        result.status[name] = "mismatch";
                        result.passed = false;
                    }
                }
            } catch (const Error& e) {
                result.error = e.what();
                result.passed = false;
            }
            result.total_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    int jobs = std::max(1, options.jobs);
    if (jobs == 1 || run.entries.size() < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return run;
}

bool RunReport::all_passed() const {
    for (const auto& e : entries)
        if (!e.passed) return false;
    return true;
}

bool RunReport::any_unresolved() const {
    for (const auto& e : entries)
        if (e.unresolved) return true;
    return false;
}

std::size_t RunReport::mismatched_unknowns() const {
    std::size_t n = 0;
    for (const auto& e : entries)
        for (const auto& [name, status] : e.status)
            if (status == "mismatch") ++n;
    return n;
}

nlohmann::ordered_json report_to_json(const IdentifiabilityReport& report) {
    nlohmann::ordered_json doc;
    doc["model"] = report.model;
    doc["probability"] = report.probability;
    doc["seed"] = report.seed;
    doc["prime"] = report.global_prime != 0 ? report.global_prime : report.local_prime;
    nlohmann::ordered_json orders = nlohmann::ordered_json::object();
    for (const auto& [output, order] : report.orders) orders[output] = order;
    doc["orders"] = std::move(orders);
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (const auto& [name, label] : report.labels) labels[name] = label_token(label);
    doc["labels"] = std::move(labels);
    return doc;
}

nlohmann::ordered_json run_report_to_json(const RunReport& run, bool include_timings) {
    nlohmann::ordered_json doc;
    doc["corpus"] = run.corpus.string();
    doc["probability"] = run.options.probability;
    doc["seed"] = run.options.seed;
    std::vector<std::string> classes(run.options.classes.begin(), run.options.classes.end());
    doc["classes"] = classes;
    doc["all_passed"] = run.all_passed();
    doc["mismatched_unknowns"] = run.mismatched_unknowns();
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : run.entries) {
        nlohmann::ordered_json item;
        item["file"] = e.entry.model_file.filename().string();
        item["class"] = e.entry.timing_class;
        item["provenance"] = e.entry.provenance;
        if (!e.error.empty()) {
            item["error"] = e.error;
        } else {
            item["passed"] = e.passed;
            item["unresolved"] = e.unresolved;
            nlohmann::ordered_json status = nlohmann::ordered_json::object();
            for (const auto& [name, s] : e.status) status[name] = s;
            item["status"] = std::move(status);
            item["report"] = report_to_json(e.report);
        }
        if (include_timings) {
            nlohmann::ordered_json t;
            t["parse_ms"] = e.parse_seconds * 1e3;
            t["local_ms"] = e.report.local_seconds * 1e3;
            t["global_ms"] = e.report.global_seconds * 1e3;
            t["total_ms"] = e.total_seconds * 1e3;
            item["timings_ms"] = std::move(t);
        }
        entries.push_back(std::move(item));
    }
    doc["entries"] = std::move(entries);
    return doc;
}

std::string format_report_table(const IdentifiabilityReport& report) {
    std::ostringstream out;
    out << "model " << report.model << "\n";
    out << "probability " << report.probability << "  seed " << report.seed;
    out << "  prime " << (report.global_prime != 0 ? report.global_prime : report.local_prime) << "\n";
    out << "jet orders:";
    for (const auto& [output, order] : report.orders) out << " " << output << ":" << order;
    out << "\n\n";
    std::size_t width = 8;
    for (const auto& [name, label] : report.labels) width = std::max(width, name.size());
    out << std::left << std::setw(static_cast<int>(width) + 2) << "unknown" << "label\n";
    for (const auto& [name, label] : report.labels) {
        const char* text = "";
        switch (label) {
            case Label::GloballyIdentifiable:
                text = "globally identifiable";
                break;
            case Label::LocallyNotGlobally:
                text = "locally but not globally identifiable";
                break;
            case Label::NonIdentifiable:
                text = "not identifiable";
                break;
            case Label::Unresolved:
                text = "unresolved (resource budget)";
                break;
        }
        out << std::left << std::setw(static_cast<int>(width) + 2) << name << text << "\n";
    }
    out << "\nphase times: local " << std::fixed << std::setprecision(2) << report.local_seconds
        << "s, global " << report.global_seconds << "s\n";
    return out.str();
}

std::string format_run_table(const RunReport& run) {
    std::ostringstream out;
    std::size_t width = 8;
    for (const auto& e : run.entries) width = std::max(width, e.entry.name.size());
    out << std::left << std::setw(static_cast<int>(width) + 2) << "entry" << std::setw(9) << "class"
        << std::setw(9) << "result" << std::right << std::setw(12) << "time (min)" << "\n";
    for (const auto& e : run.entries) {
        std::string result = !e.error.empty() ? "error" : (e.passed ? "pass" : (e.unresolved ? "unres" : "FAIL"));
        out << std::left << std::setw(static_cast<int>(width) + 2) << e.entry.name << std::setw(9)
            << e.entry.timing_class << std::setw(9) << result << std::right << std::setw(12)
            << std::fixed << std::setprecision(3) << (e.total_seconds / 60.0) << "\n";
        if (!e.error.empty()) out << "    " << e.error << "\n";
        for (const auto& [name, status] : e.status)
            if (status != "match")
                out << "    " << name << ": " << status << " (expected "
                    << label_token(e.entry.expected.at(name)) << ", got "
                    << label_token(e.report.label_of(name)) << ")\n";
    }
    out << (run.all_passed() ? "all entries passed" : "FAILURES present") << "\n";
    return out.str();
}

}  // namespace structid
