#pragma once

// Simulation time and the two append-only logs every component writes into.
// All timestamps are ticks; nothing in an artifact ever comes from the wall
// clock.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitb/url.hpp"

namespace bitb {

using Tick = std::uint64_t;

class SimClock {
  public:
    Tick now() const { return now_; }
    void advance(Tick ticks) { now_ += ticks; }

  private:
    Tick now_ = 0;
};

enum class Actor { kVictim, kAttacker, kQrService };

std::string to_string(Actor actor);
Actor actor_from_string(const std::string& name);

// One simulation event. Events are totally ordered by (tick, seq).
struct ScenarioEvent {
    Tick tick = 0;
    std::uint64_t seq = 0;
    Actor actor = Actor::kVictim;
    std::string kind;
    nlohmann::json detail = nlohmann::json::object();

    nlohmann::json to_json() const;
    static ScenarioEvent from_json(const nlohmann::json& j);
};

class EventLog {
  public:
    const ScenarioEvent& emit(Tick tick, Actor actor, std::string kind,
                              nlohmann::json detail = nlohmann::json::object());
    const std::vector<ScenarioEvent>& events() const { return events_; }

  private:
    std::vector<ScenarioEvent> events_;
    std::uint64_t next_seq_ = 0;
};

// HTTP-like interaction record. body_fields holds field names only; the
// values live in the capture store, never in trace artifacts.
struct TraceEntry {
    std::string method;  // "GET" | "POST"
    Url url;
    std::vector<std::string> body_fields;
    std::string initiator;  // "user" | "script" | "redirect"
    Tick tick = 0;

    Origin origin() const { return url.origin(); }
    nlohmann::json to_json() const;
    static TraceEntry from_json(const nlohmann::json& j);
};

class TraceLog {
  public:
    const TraceEntry& append(TraceEntry entry);
    const std::vector<TraceEntry>& entries() const { return entries_; }

  private:
    std::vector<TraceEntry> entries_;
};

}  // namespace bitb
