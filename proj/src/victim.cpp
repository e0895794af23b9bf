#include "bitb/victim.hpp"

#include <array>
#include <random>
#include <utility>

#include "bitb/errors.hpp"

namespace bitb {
namespace {

// Raw engine output only; the distribution adapters in <random> are not
// pinned by the standard and would wreck cross-platform determinism.
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string lowercase(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
}

Url route_on(const Origin& origin, std::string_view path) {
    return parse_url(origin.display() + std::string(path));
}

}  // namespace

VictimProfile VictimProfile::from_seed(std::uint64_t seed) {
    static constexpr std::array<const char*, 8> kNames = {
        "Alex", "Sam", "Jordan", "Taylor", "Riley", "Casey", "Morgan", "Quinn"};
    static constexpr std::array<const char*, 4> kOses = {"Android", "iOS", "Android",
                                                         "Android"};
    static constexpr std::array<const char*, 3> kBrowsers = {"Chrome", "Firefox", "Safari"};
    static constexpr std::array<const char*, 4> kLocations = {"Geelong", "Ballarat",
                                                              "Bendigo", "Hobart"};
    std::mt19937_64 rng(seed);
    VictimProfile profile;
    profile.first_name = kNames[rng() % kNames.size()];
    profile.email = lowercase(profile.first_name) + std::to_string(10 + rng() % 90) +
                    "@example.test";
    profile.password = "pw-" + to_base36(rng());
    profile.device.os = kOses[rng() % kOses.size()];
    profile.device.browser = kBrowsers[rng() % kBrowsers.size()];
    profile.device.ip = "10.0.0." + std::to_string(2 + rng() % 250);
    profile.device.location = kLocations[rng() % kLocations.size()];
    return profile;
}

nlohmann::json VictimProfile::to_json() const {
    return {
        {"first_name", first_name},
        {"email", email},
        {"password", password},
        {"device", device.to_json()},
    };
}

VictimProfile VictimProfile::from_json(const nlohmann::json& j) {
    VictimProfile profile;
    profile.first_name = j.at("first_name").get<std::string>();
    profile.email = j.at("email").get<std::string>();
    profile.password = j.at("password").get<std::string>();
    profile.device = DeviceProfile::from_json(j.at("device"));
    return profile;
}

void BehaviorPolicy::validate() const {
    if (p_abort_modal1 < 0.0 || p_abort_modal1 > 1.0 || p_abort_modal2 < 0.0 ||
        p_abort_modal2 > 1.0) {
        throw ConfigError("abort probabilities must lie in [0,1]");
    }
}

VictimRunResult run_victim(const VictimProfile& profile, const std::string& short_id,
                           const BehaviorPolicy& policy, World& world) {
    policy.validate();
    std::mt19937_64 rng(policy.rng_seed);

    auto abort_on_error = [&](std::string_view step, const Response& res) {
        world.events.emit(world.clock.now(), Actor::kVictim, "abort",
                          {{"at", std::string(step)}, {"status", res.status}});
        return VictimRunResult{false, "protocol_error"};
    };

    // Scan the printed code; the shortener resolves and logs telemetry.
    world.events.emit(world.clock.now(), Actor::kVictim, "scan", {{"short_id", short_id}});
    ScanEvent scan;
    try {
        scan = world.registry.resolve_scan(short_id, profile.device, world.clock.now());
    } catch (const Error&) {
        world.events.emit(world.clock.now(), Actor::kVictim, "abort",
                          {{"at", "scan"}, {"status", 0}});
        return {false, "protocol_error"};
    }
    world.events.emit(world.clock.now(), Actor::kQrService, "resolve",
                      {{"short_id", short_id},
                       {"target", scan.resolved_target.display()}});

    // Follow the resolved link.
    const Url landing = scan.resolved_target;
    world.events.emit(world.clock.now(), Actor::kVictim, "get_claim_now",
                      {{"url", landing.display()}});
    Request get;
    get.method = "GET";
    get.url = landing;
    get.tick = world.clock.now();
    world.trace.append(TraceEntry{"GET", landing, {}, "user", get.tick});

    Response page;
    try {
        page = world.server.handle(get);
    } catch (const Error&) {
        return abort_on_error("get_claim_now", Response{500});
    }
    if (!page.ok()) return abort_on_error("get_claim_now", page);

    world.snapshots.emplace(kSnapshotPageServed, *page.document);
    world.events.emit(world.clock.now(), Actor::kVictim, "modal1_shown",
                      {{"modal", "modal1"}});

    if (unit_draw(rng) < policy.p_abort_modal1) return {false, "abandoned_modal1"};

    // First prompt: hand over the first name.
    world.events.emit(world.clock.now(), Actor::kVictim, "modal1_submit",
                      {{"fields", {"first_name"}}});
    Request submit1;
    submit1.method = "POST";
    submit1.url = route_on(page.document->source_origin, kRouteModal1Submit);
    submit1.body = {{"first_name", profile.first_name}};
    submit1.tick = world.clock.now();
    world.trace.append(
        TraceEntry{"POST", submit1.url, {"first_name"}, "user", submit1.tick});

    Response swapped;
    try {
        swapped = world.server.handle(submit1);
    } catch (const Error&) {
        return abort_on_error("modal1_submit", Response{500});
    }
    if (!swapped.ok()) return abort_on_error("modal1_submit", swapped);

    world.snapshots.emplace(kSnapshotModal2Revealed, *swapped.document);

    if (unit_draw(rng) < policy.p_abort_modal2) return {false, "abandoned_modal2"};

    // Second prompt: the sign-in form. The page script posts wherever the
    // form points; the victim never reads the address.
    const Document& shown = *swapped.document;
    const Node* form = nullptr;
    for (const Node* n : visible_nodes(shown)) {
        if (n->tag == "form" && !n->attr("action").empty()) {
            form = n;
            break;
        }
    }
    if (!form) return abort_on_error("modal2_submit", Response{500});

    world.events.emit(world.clock.now(), Actor::kVictim, "modal2_submit",
                      {{"fields", {"email", "password"}}});
    Request submit2;
    submit2.method = "POST";
    submit2.url = parse_url(form->attr("action"));
    submit2.body = {{"first_name", profile.first_name},
                    {"email", profile.email},
                    {"password", profile.password}};
    submit2.initiator = "script";
    submit2.tick = world.clock.now();
    world.trace.append(TraceEntry{"POST", submit2.url,
                                  {"first_name", "email", "password"}, "script",
                                  submit2.tick});

    Response saved;
    try {
        saved = world.server.handle(submit2);
    } catch (const Error&) {
        return abort_on_error("save_user", Response{500});
    }
    if (!saved.ok()) return abort_on_error("save_user", saved);

    world.snapshots.emplace(kSnapshotFinal, *saved.document);

    // Land on the official site; the tab looks legitimate again.
    const Url after = *saved.redirect_to;
    world.events.emit(world.clock.now(), Actor::kVictim, "redirect_followed",
                      {{"url", after.display()}});
    world.trace.append(TraceEntry{"GET", after, {}, "redirect", world.clock.now()});

    return {true, "captured"};
}

}  // namespace bitb
