#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "structid/identifiability.hpp"

#include "json.hpp"

namespace structid {

// One benchmark model plus its expected-label fixture.
struct CorpusEntry {
    std::filesystem::path model_file;
    std::string name;          // file stem
    std::string timing_class;  // fast | medium | stretch
    std::string provenance;    // benchmark-suite section the labels come from
    std::map<std::string, Label> expected;
};

// Pairs every *.sian-model in the directory with its *.expected.json
// fixture; throws FixtureError naming the entry on malformed fixtures.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir);

struct BenchOptions {
    std::set<std::string> classes = {"fast", "medium"};
    int jobs = 1;
    std::uint64_t seed = 0;
    double probability = 0.99;
    int max_order = -1;
    GroebnerOptions groebner;
};

struct EntryResult {
    CorpusEntry entry;
    IdentifiabilityReport report;
    // Per unknown: "match", "mismatch", or "unresolved".
    std::map<std::string, std::string> status;
    bool passed = false;
    bool unresolved = false;
    std::string error;  // parse or fixture failure
    double parse_seconds = 0.0;
    double total_seconds = 0.0;
};

struct RunReport {
    std::filesystem::path corpus;
    BenchOptions options;
    std::vector<EntryResult> entries;

    bool all_passed() const;
    bool any_unresolved() const;
    std::size_t mismatched_unknowns() const;
};

// Runs every selected entry (concurrently up to options.jobs) and compares
// the computed labels against the fixtures.
RunReport run_benchmarks(const std::filesystem::path& corpus, const BenchOptions& options);

nlohmann::ordered_json report_to_json(const IdentifiabilityReport& report);
nlohmann::ordered_json run_report_to_json(const RunReport& run, bool include_timings = true);

std::string format_report_table(const IdentifiabilityReport& report);
std::string format_run_table(const RunReport& run);

}  // namespace structid
