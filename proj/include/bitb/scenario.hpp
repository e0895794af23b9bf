#pragma once

// Scenario plumbing: a JSON config describing one end-to-end run, the runner
// that executes it and writes the artifact directory, and the loaders the
// analyzer and report commands use to read those artifacts back.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitb/detector.hpp"
#include "bitb/protocol.hpp"
#include "bitb/victim.hpp"

namespace bitb {

// Artifact file names inside a scenario output directory.
inline constexpr std::string_view kEventsFile = "events.jsonl";
inline constexpr std::string_view kTraceFile = "trace.jsonl";
inline constexpr std::string_view kCapturesFile = "captures.jsonl";
inline constexpr std::string_view kScansFile = "scans.jsonl";
inline constexpr std::string_view kRegistryFile = "registry.json";
inline constexpr std::string_view kScenarioFile = "scenario.json";
inline constexpr std::string_view kReportFile = "report.json";
inline constexpr std::string_view kSnapshotDir = "snapshots";

struct FixtureRef {
    Url url;
    std::filesystem::path file;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::filesystem::path out;  // default artifact directory, CLI --out wins
    std::filesystem::path templates_dir;
    std::vector<FixtureRef> fixtures;
    Url qr_initial_target;
    std::optional<Url> qr_retarget_to;
    AttackConfig attacker;
    std::optional<VictimProfile> victim;  // absent: derived from the seed
    BehaviorPolicy policy;

    // Relative paths in the JSON resolve against base_dir (the config file's
    // directory). ConfigError on anything malformed.
    static ScenarioConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir);
    static ScenarioConfig load_file(const std::filesystem::path& path);

    // --seed N: replaces both the scenario seed and the policy RNG seed.
    void override_seed(std::uint64_t new_seed);
};

struct ScenarioResult {
    VictimRunResult run;
    std::size_t event_count = 0;
    std::size_t capture_count = 0;
    std::size_t scan_count = 0;
};

// Executes the scenario and writes the artifact set into out_dir. Throws on
// unreadable fixture or template files; a victim abort is still a completed
// run.
ScenarioResult run_scenario(const ScenarioConfig& config,
                            const std::filesystem::path& out_dir);

// Artifact readers for the analyzer. ArtifactError or MalformedSnapshot on
// inputs that do not parse.
Document read_snapshot(const std::filesystem::path& path);
std::vector<TraceEntry> read_trace(const std::filesystem::path& path);
ScanChain read_scan_chain(const std::filesystem::path& path);

struct RetargetOutcome {
    Url old_target;
    Url new_target;
};

// Edits the stored registry in place: the new edit is stamped one tick after
// the file's recorded clock, and the clock advances with it.
RetargetOutcome retarget_registry_file(const std::filesystem::path& file,
                                       const std::string& short_id, const Url& new_url);

struct ScenarioRow {
    std::uint64_t seed = 0;
    std::size_t events = 0;
    std::size_t captures = 0;
    std::string telemetry;  // "os/browser/ip/location" of the first scan, or "-"
    std::string verdict;    // from report.json, or "-" before analysis
};

// Scans dir (itself, or its immediate subdirectories) for scenario artifact
// sets. ArtifactError if none are found; rows come back sorted by seed.
std::vector<ScenarioRow> collect_report_rows(const std::filesystem::path& dir);
std::string format_report(const std::vector<ScenarioRow>& rows);

}  // namespace bitb
