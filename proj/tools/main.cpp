#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "structid/bench.hpp"
#include "structid/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBenchMismatch = 1;
constexpr int kExitParseError = 2;
constexpr int kExitUnresolved = 3;

std::string read_file(const std::string& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ok = false;
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ok = true;
    return buf.str();
}

void print_diagnostics(const structid::Diagnostics& diags) {
    for (const auto& d : diags.items) {
        const char* severity = d.severity == structid::Severity::Error
                                   ? "error"
                                   : (d.severity == structid::Severity::Warning ? "warning" : "note");
        if (d.span.line > 0)
            std::cerr << d.span.line << ":" << d.span.column << ": " << severity << ": " << d.message
                      << "\n";
        else
            std::cerr << severity << ": " << d.message << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structural identifiability analysis for rational ODE models"};
    app.require_subcommand(1);

    // analyze
    std::string model_path;
    double probability = 0.99;
    std::uint64_t seed = 0;
    int max_order = -1;
    bool as_json = false;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    CLI::App* analyze = app.add_subcommand("analyze", "Label every unknown of one model");
    analyze->add_option("file", model_path, "model file (.sian-model)")->required();
    analyze->add_option("--prob", probability, "probability of correctness, in (0,1)");
    analyze->add_option("--seed", seed, "random seed");
    analyze->add_option("--max-order", max_order, "override of the prolongation ceiling");
    analyze->add_flag("--json", as_json, "emit the JSON report");
    analyze->add_option("--jobs", jobs, "worker threads");

    // bench
    std::string corpus_dir = "corpus";
    std::string classes_csv = "fast,medium";
    bool bench_json = false;

    CLI::App* bench = app.add_subcommand("bench", "Run the benchmark corpus against expected labels");
    bench->add_option("--corpus", corpus_dir, "corpus directory");
    bench->add_option("--classes", classes_csv, "comma-separated timing classes (fast,medium,stretch)");
    bench->add_option("--prob", probability, "probability of correctness, in (0,1)");
    bench->add_option("--seed", seed, "random seed");
    bench->add_option("--jobs", jobs, "concurrent entries");
    bench->add_flag("--json", bench_json, "emit the JSON run report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            bool ok = false;
            std::string text = read_file(model_path, ok);
            if (!ok) {
                std::cerr << "error: cannot open '" << model_path << "'\n";
                return kExitParseError;
            }
            structid::ParseResult parsed = structid::parse_model(text);
            print_diagnostics(parsed.diagnostics);
            if (!parsed.model) return kExitParseError;
            print_diagnostics(structid::validate_model(*parsed.model));

            structid::AnalysisOptions opts;
            opts.probability = probability;
            opts.seed = seed;
            opts.max_order = max_order;
            opts.jobs = jobs;
            structid::IdentifiabilityReport report = structid::global_classification(*parsed.model, opts);

            if (as_json)
                std::cout << structid::report_to_json(report).dump(2) << "\n";
            else
                std::cout << structid::format_report_table(report);
            return report.has_unresolved() ? kExitUnresolved : kExitOk;
        }

        structid::BenchOptions opts;
        opts.classes.clear();
        std::stringstream classes(classes_csv);
        std::string item;
        while (std::getline(classes, item, ','))
            if (!item.empty()) opts.classes.insert(item);
        opts.jobs = jobs;
        opts.seed = seed;
        opts.probability = probability;
        structid::RunReport run = structid::run_benchmarks(corpus_dir, opts);

        if (bench_json)
            std::cout << structid::run_report_to_json(run).dump(2) << "\n";
        else
            std::cout << structid::format_run_table(run);

        for (const auto& e : run.entries)
            if (!e.error.empty()) return kExitParseError;
        if (!run.all_passed()) {
            if (run.mismatched_unknowns() > 0) return kExitBenchMismatch;
            return kExitUnresolved;
        }
        return kExitOk;
    } catch (const structid::FixtureError& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const structid::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnresolved;
    }
}
