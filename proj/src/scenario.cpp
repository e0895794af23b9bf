#include "bitb/scenario.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "bitb/errors.hpp"
#include "bitb/jsonl.hpp"

namespace bitb {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write " + path.string());
    out << text;
}

fs::path resolve(const fs::path& base, const std::string& value) {
    const fs::path p(value);
    return p.is_absolute() ? p : base / p;
}

Url url_at(const nlohmann::json& j, const char* key) {
    return parse_url(j.at(key).get<std::string>());
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j, const fs::path& base_dir) {
    try {
        if (j.at("schema").get<int>() != 1) throw ConfigError("unsupported config schema");

        ScenarioConfig cfg;
        cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) cfg.out = resolve(base_dir, j.at("out").get<std::string>());
        cfg.templates_dir = resolve(base_dir, j.at("templates").get<std::string>());

        for (const nlohmann::json& f : j.value("fixtures", nlohmann::json::array())) {
            cfg.fixtures.push_back(
                {url_at(f, "url"), resolve(base_dir, f.at("file").get<std::string>())});
        }

        const nlohmann::json& qr = j.at("qr");
        cfg.qr_initial_target = url_at(qr, "initial_target");
        if (qr.contains("retarget_to")) cfg.qr_retarget_to = url_at(qr, "retarget_to");

        const nlohmann::json& atk = j.at("attacker");
        cfg.attacker.server = url_at(atk, "server");
        cfg.attacker.capture_url = url_at(atk, "capture_url");
        cfg.attacker.displayed_url = url_at(atk, "displayed_url");
        cfg.attacker.signin_display_url = url_at(atk, "signin_display_url");
        cfg.attacker.redirect_url = url_at(atk, "redirect_url");
        cfg.attacker.form_action = url_at(atk, "form_action");
        cfg.attacker.campaign_heading = atk.at("campaign_heading").get<std::string>();

        if (j.contains("victim")) cfg.victim = VictimProfile::from_json(j.at("victim"));

        cfg.policy.rng_seed = cfg.seed;
        if (j.contains("policy")) {
            const nlohmann::json& pol = j.at("policy");
            cfg.policy.p_abort_modal1 = pol.value("p_abort_modal1", 0.0);
            cfg.policy.p_abort_modal2 = pol.value("p_abort_modal2", 0.0);
            cfg.policy.rng_seed = pol.value("rng_seed", cfg.seed);
        }
        cfg.policy.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad scenario config: ") + e.what());
    } catch (const MalformedUrl& e) {
        throw ConfigError(std::string("bad scenario config: ") + e.what());
    }
}

ScenarioConfig ScenarioConfig::load_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j, path.parent_path());
}

void ScenarioConfig::override_seed(std::uint64_t new_seed) {
    seed = new_seed;
    policy.rng_seed = new_seed;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir) {
    FixtureStore fixtures;
    for (const FixtureRef& ref : cfg.fixtures) fixtures.load_file(ref.url, ref.file);
    TemplateGenerator generator(cfg.templates_dir);

    SimClock clock;
    EventLog events;
    TraceLog trace;
    CaptureStore captures;
    QrRegistry registry;
    const std::string short_id = registry.create_dynamic(cfg.qr_initial_target, clock.now()).short_id;
    if (cfg.qr_retarget_to) registry.retarget(short_id, *cfg.qr_retarget_to, clock.now());

    AttackServer server(cfg.attacker, fixtures, generator, clock, events, captures);
    std::map<std::string, Document> snapshots;
    World world{clock, registry, server, events, trace, snapshots};

    const VictimProfile profile = cfg.victim ? *cfg.victim : VictimProfile::from_seed(cfg.seed);

    ScenarioResult result;
    result.run = run_victim(profile, short_id, cfg.policy, world);
    result.event_count = events.events().size();
    result.capture_count = captures.size();
    result.scan_count = registry.scan_events().size();

    fs::create_directories(out_dir / kSnapshotDir);

    jsonl::File ev;
    ev.header = {{"schema", 1}, {"seed", cfg.seed}};
    for (const ScenarioEvent& e : events.events()) ev.lines.push_back(e.to_json());
    jsonl::write(out_dir / kEventsFile, ev);

    jsonl::File tr;
    tr.header = {{"schema", 1}};
    for (const TraceEntry& e : trace.entries()) tr.lines.push_back(e.to_json());
    jsonl::write(out_dir / kTraceFile, tr);

    jsonl::write(out_dir / kCapturesFile, captures.to_jsonl(cfg.seed));

    jsonl::File sc;
    sc.header = {{"record", registry.record(short_id).to_json()}, {"schema", 1}};
    for (const ScanEvent& s : registry.scan_events()) sc.lines.push_back(s.to_json());
    jsonl::write(out_dir / kScansFile, sc);

    const nlohmann::json reg = {
        {"clock", clock.now()}, {"registry", registry.to_json()}, {"schema", 1}};
    write_text(out_dir / kRegistryFile, reg.dump() + "\n");

    for (const auto& [name, doc] : snapshots) {
        write_text(out_dir / fs::path(kSnapshotDir) / (name + ".json"), serialize(doc) + "\n");
    }

    const nlohmann::json meta = {{"completed", result.run.completed},
                                 {"outcome", result.run.outcome},
                                 {"schema", 1},
                                 {"seed", cfg.seed}};
    write_text(out_dir / kScenarioFile, meta.dump() + "\n");
    return result;
}

Document read_snapshot(const fs::path& path) { return deserialize(read_text(path)); }

std::vector<TraceEntry> read_trace(const fs::path& path) {
    const jsonl::File file = jsonl::read(path);
    try {
        std::vector<TraceEntry> entries;
        for (const nlohmann::json& line : file.lines) entries.push_back(TraceEntry::from_json(line));
        return entries;
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactError("bad trace line in " + path.string() + ": " + e.what());
    }
}

ScanChain read_scan_chain(const fs::path& path) {
    const jsonl::File file = jsonl::read(path);
    try {
        ScanChain chain;
        chain.record = DynamicQrRecord::from_json(file.header.at("record"));
        for (const nlohmann::json& line : file.lines) chain.scans.push_back(ScanEvent::from_json(line));
        return chain;
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactError("bad scan chain in " + path.string() + ": " + e.what());
    }
}

RetargetOutcome retarget_registry_file(const fs::path& file, const std::string& short_id,
                                       const Url& new_url) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(file));
    } catch (const nlohmann::json::parse_error& e) {
        throw ArtifactError("registry file is not valid JSON: " + std::string(e.what()));
    }

    Tick clock = 0;
    QrRegistry registry;
    try {
        if (j.at("schema").get<int>() != 1) throw ArtifactError("unsupported registry schema");
        clock = j.at("clock").get<Tick>();
        registry = QrRegistry::from_json(j.at("registry"));
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactError("bad registry file: " + std::string(e.what()));
    }

    RetargetOutcome outcome;
    outcome.old_target = registry.record(short_id).current_target;  // UnknownShortId
    outcome.new_target = registry.retarget(short_id, new_url, clock + 1).current_target;

    const nlohmann::json updated = {
        {"clock", clock + 1}, {"registry", registry.to_json()}, {"schema", 1}};
    write_text(file, updated.dump() + "\n");
    return outcome;
}

std::vector<ScenarioRow> collect_report_rows(const fs::path& dir) {
    const auto has_artifacts = [](const fs::path& d) {
        return fs::exists(d / kEventsFile);
    };

    std::vector<fs::path> scenario_dirs;
    if (has_artifacts(dir)) {
        scenario_dirs.push_back(dir);
    } else if (fs::is_directory(dir)) {
        for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
            if (entry.is_directory() && has_artifacts(entry.path())) {
                scenario_dirs.push_back(entry.path());
            }
        }
        std::sort(scenario_dirs.begin(), scenario_dirs.end());
    }
    if (scenario_dirs.empty()) {
        throw ArtifactError("no scenario artifacts under " + dir.string());
    }

    std::vector<ScenarioRow> rows;
    for (const fs::path& d : scenario_dirs) {
        try {
            ScenarioRow row;
            const jsonl::File ev = jsonl::read(d / kEventsFile);
            row.seed = ev.header.at("seed").get<std::uint64_t>();
            row.events = ev.lines.size();
            row.captures = jsonl::read(d / kCapturesFile).lines.size();

            const jsonl::File scans = jsonl::read(d / kScansFile);
            if (scans.lines.empty()) {
                row.telemetry = "-";
            } else {
                const nlohmann::json& s = scans.lines.front();
                row.telemetry = s.at("os").get<std::string>() + "/" +
                                s.at("browser").get<std::string>() + "/" +
                                s.at("ip").get<std::string>() + "/" +
                                s.at("location").get<std::string>();
            }

            row.verdict = "-";
            if (fs::exists(d / kReportFile)) {
                row.verdict =
                    nlohmann::json::parse(read_text(d / kReportFile)).at("verdict").get<std::string>();
            }
            rows.push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw ArtifactError("bad artifacts in " + d.string() + ": " + e.what());
        }
    }

    std::sort(rows.begin(), rows.end(),
              [](const ScenarioRow& a, const ScenarioRow& b) { return a.seed < b.seed; });
    return rows;
}

std::string format_report(const std::vector<ScenarioRow>& rows) {
    const std::array<std::string, 5> head = {"seed", "events", "captures", "telemetry", "verdict"};
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back(head);
    for (const ScenarioRow& r : rows) {
        cells.push_back({std::to_string(r.seed), std::to_string(r.events),
                         std::to_string(r.captures), r.telemetry, r.verdict});
    }

    std::array<std::size_t, 5> width{};
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }

    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i];
            if (i + 1 < row.size()) out << std::string(width[i] - row[i].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace bitb
