#pragma once

// The scripted victim: scans the code, follows it, fills both modals, and
// gets bounced to the real site. Two probability knobs model abandonment at
// the modal prompts; everything else is the fully compliant walk the attack
// assumes.

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "bitb/page.hpp"
#include "bitb/protocol.hpp"
#include "bitb/qr.hpp"
#include "bitb/sim.hpp"

namespace bitb {

struct VictimProfile {
    std::string first_name;
    std::string email;
    std::string password;
    DeviceProfile device;

    // Synthetic identity derived portably from the seed alone.
    static VictimProfile from_seed(std::uint64_t seed);

    nlohmann::json to_json() const;
    static VictimProfile from_json(const nlohmann::json& j);
};

struct BehaviorPolicy {
    double p_abort_modal1 = 0.0;
    double p_abort_modal2 = 0.0;
    std::uint64_t rng_seed = 0;

    void validate() const;  // ConfigError when a probability leaves [0,1]
};

// Everything one scenario run touches, wired by the caller.
struct World {
    SimClock& clock;
    QrRegistry& registry;
    AttackServer& server;
    EventLog& events;
    TraceLog& trace;
    // Documents as the victim saw them, keyed by stage label.
    std::map<std::string, Document>& snapshots;
};

inline constexpr std::string_view kSnapshotPageServed = "01_page_served";
inline constexpr std::string_view kSnapshotModal2Revealed = "02_modal2_revealed";
inline constexpr std::string_view kSnapshotFinal = "03_final";

struct VictimRunResult {
    bool completed = false;
    // "captured" | "abandoned_modal1" | "abandoned_modal2" | "protocol_error"
    std::string outcome;
};

VictimRunResult run_victim(const VictimProfile& profile, const std::string& short_id,
                           const BehaviorPolicy& policy, World& world);

}  // namespace bitb
