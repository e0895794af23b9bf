// bitbsim: run sandboxed phishing-flow scenarios and analyze the artifacts
// they leave behind. Four subcommands: simulate, retarget, analyze, report.
// Everything is tick-based and in-process; nothing here opens a socket.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bitb/errors.hpp"
#include "bitb/scenario.hpp"

namespace {

// Exit code classes: 0 done (benign for analyze), 1 suspicious verdict,
// 2 bad config or malformed input, 3 missing or unreadable data files,
// 4 unknown short id.
constexpr int kOk = 0;
constexpr int kSuspicious = 1;
constexpr int kBadInput = 2;
constexpr int kBadData = 3;
constexpr int kUnknownId = 4;

int cmd_simulate(const std::string& config_path, const std::string& out_override,
                 const std::optional<std::uint64_t>& seed, bool quiet) {
    bitb::ScenarioConfig cfg;
    try {
        cfg = bitb::ScenarioConfig::load_file(config_path);
    } catch (const bitb::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadInput;
    }
    if (seed) cfg.override_seed(*seed);

    const std::filesystem::path out =
        out_override.empty() ? cfg.out : std::filesystem::path(out_override);
    if (out.empty()) {
        std::cerr << "config error: no output directory (config \"out\" or --out)\n";
        return kBadInput;
    }

    try {
        const bitb::ScenarioResult result = bitb::run_scenario(cfg, out);
        if (!quiet) {
            std::cout << "outcome: " << result.run.outcome << "  events: " << result.event_count
                      << "  captures: " << result.capture_count
                      << "  scans: " << result.scan_count << '\n';
            std::cout << "artifacts: " << out.string() << '\n';
        }
        return kOk;
    } catch (const bitb::Error& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return kBadData;
    }
}

int cmd_retarget(const std::string& registry_path, const std::string& short_id,
                 const std::string& to) {
    try {
        const bitb::RetargetOutcome outcome =
            bitb::retarget_registry_file(registry_path, short_id, bitb::parse_url(to));
        std::cout << short_id << ": " << outcome.old_target.display() << " -> "
                  << outcome.new_target.display() << '\n';
        return kOk;
    } catch (const bitb::UnknownShortId& e) {
        std::cerr << "unknown short id: " << e.what() << '\n';
        return kUnknownId;
    } catch (const bitb::Error& e) {
        std::cerr << "retarget error: " << e.what() << '\n';
        return kBadInput;
    }
}

int cmd_analyze(const std::string& snapshot_path, const std::string& trace_path,
                const std::string& scans_path, const std::string& out_path) {
    try {
        const bitb::Document doc = bitb::read_snapshot(snapshot_path);
        const std::vector<bitb::TraceEntry> trace = bitb::read_trace(trace_path);
        std::optional<bitb::ScanChain> chain;
        if (!scans_path.empty()) chain = bitb::read_scan_chain(scans_path);

        const bitb::DetectionReport report = bitb::analyze(doc, trace, chain);
        const std::string text = report.to_json().dump() + "\n";
        std::cout << text;

        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "analyze error: cannot write " << out_path << '\n';
            return kBadInput;
        }
        out << text;
        return report.verdict == "suspicious" ? kSuspicious : kOk;
    } catch (const bitb::Error& e) {
        std::cerr << "analyze error: " << e.what() << '\n';
        return kBadInput;
    }
}

int cmd_report(const std::string& dir) {
    try {
        std::cout << bitb::format_report(bitb::collect_report_rows(dir));
        return kOk;
    } catch (const bitb::Error& e) {
        std::cerr << "report error: " << e.what() << '\n';
        return kBadData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sandboxed QR phishing scenario runner and analyzer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_value = 0;
    bool quiet = false;
    CLI::App* simulate = app.add_subcommand("simulate", "run one scenario, write artifacts");
    simulate->add_option("--config", config_path, "scenario config JSON")->required();
    simulate->add_option("--out", out_dir, "artifact directory (overrides config)");
    CLI::Option* seed_opt =
        simulate->add_option("--seed", seed_value, "override the scenario seed");
    simulate->add_flag("--quiet", quiet, "suppress the summary line");

    std::string registry_path;
    std::string short_id;
    std::string to_url;
    CLI::App* retarget = app.add_subcommand("retarget", "repoint a stored dynamic QR code");
    retarget->add_option("--registry", registry_path, "registry.json from a simulate run")
        ->required();
    retarget->add_option("--id", short_id, "short id to edit")->required();
    retarget->add_option("--to", to_url, "new target URL")->required();

    std::string snapshot_path;
    std::string trace_path;
    std::string scans_path;
    std::string report_path;
    CLI::App* analyze = app.add_subcommand("analyze", "score a snapshot plus its trace");
    analyze->add_option("--snapshot", snapshot_path, "page snapshot JSON")->required();
    analyze->add_option("--trace", trace_path, "request trace JSONL")->required();
    analyze->add_option("--scans", scans_path, "scan chain JSONL (optional)");
    analyze->add_option("--out", report_path, "where to write the report JSON")->required();

    std::string report_dir;
    CLI::App* report = app.add_subcommand("report", "summarize scenario artifact directories");
    report->add_option("--dir", report_dir, "directory holding one or more runs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;  // fold usage errors into the config class
    }

    if (app.got_subcommand(simulate)) {
        std::optional<std::uint64_t> seed;
        if (seed_opt->count() > 0) seed = seed_value;
        return cmd_simulate(config_path, out_dir, seed, quiet);
    }
    if (app.got_subcommand(retarget)) return cmd_retarget(registry_path, short_id, to_url);
    if (app.got_subcommand(analyze)) {
        return cmd_analyze(snapshot_path, trace_path, scans_path, report_path);
    }
    return cmd_report(report_dir);
}
