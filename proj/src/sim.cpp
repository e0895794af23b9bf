#include "bitb/sim.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "bitb/errors.hpp"
#include "bitb/jsonl.hpp"

namespace bitb {

std::string to_string(Actor actor) {
    switch (actor) {
        case Actor::kVictim: return "victim";
        case Actor::kAttacker: return "attacker";
        case Actor::kQrService: return "qr_service";
    }
    throw Error("unreachable actor value");
}

Actor actor_from_string(const std::string& name) {
    if (name == "victim") return Actor::kVictim;
    if (name == "attacker") return Actor::kAttacker;
    if (name == "qr_service") return Actor::kQrService;
    throw ArtifactError("unknown actor '" + name + "'");
}

nlohmann::json ScenarioEvent::to_json() const {
    return {
        {"tick", tick},
        {"seq", seq},
        {"actor", to_string(actor)},
        {"kind", kind},
        {"detail", detail},
    };
}

ScenarioEvent ScenarioEvent::from_json(const nlohmann::json& j) {
    ScenarioEvent ev;
    ev.tick = j.at("tick").get<Tick>();
    ev.seq = j.at("seq").get<std::uint64_t>();
    ev.actor = actor_from_string(j.at("actor").get<std::string>());
    ev.kind = j.at("kind").get<std::string>();
    ev.detail = j.at("detail");
    return ev;
}

const ScenarioEvent& EventLog::emit(Tick tick, Actor actor, std::string kind,
                                    nlohmann::json detail) {
    ScenarioEvent ev;
    ev.tick = tick;
    ev.seq = next_seq_++;
    ev.actor = actor;
    ev.kind = std::move(kind);
    ev.detail = std::move(detail);
    events_.push_back(std::move(ev));
    return events_.back();
}

nlohmann::json TraceEntry::to_json() const {
    const Origin o = origin();
    return {
        {"method", method},
        {"url", url.display()},
        {"origin", {{"scheme", o.scheme}, {"host", o.host}, {"port", o.port}}},
        {"body_fields", body_fields},
        {"initiator", initiator},
        {"tick", tick},
    };
}

TraceEntry TraceEntry::from_json(const nlohmann::json& j) {
    TraceEntry entry;
    entry.method = j.at("method").get<std::string>();
    entry.url = parse_url(j.at("url").get<std::string>());
    entry.body_fields = j.at("body_fields").get<std::vector<std::string>>();
    entry.initiator = j.at("initiator").get<std::string>();
    entry.tick = j.at("tick").get<Tick>();
    return entry;
}

const TraceEntry& TraceLog::append(TraceEntry entry) {
    entries_.push_back(std::move(entry));
    return entries_.back();
}

namespace jsonl {

std::string dump(const File& file) {
    std::ostringstream out;
    out << file.header.dump() << '\n';
    for (const auto& line : file.lines) out << line.dump() << '\n';
    return out.str();
}

void write(const std::filesystem::path& path, const File& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot open " + path.string() + " for writing");
    out << dump(file);
    if (!out.good()) throw ArtifactError("short write to " + path.string());
}

File read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("cannot open " + path.string());
    File file;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ArtifactError(path.string() + ":" + std::to_string(lineno) + ": " +
                                e.what());
        }
        if (first) {
            file.header = std::move(parsed);
            first = false;
        } else {
            file.lines.push_back(std::move(parsed));
        }
    }
    if (first) throw ArtifactError(path.string() + ": missing header line");
    return file;
}

}  // namespace jsonl
}  // namespace bitb
