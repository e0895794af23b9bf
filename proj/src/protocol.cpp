#include "bitb/protocol.hpp"

#include <algorithm>
#include <utility>

#include "bitb/errors.hpp"

namespace bitb {
namespace {

// 422 unless the body holds exactly the declared fields, each non-empty.
bool body_well_formed(const std::map<std::string, std::string>& body,
                      const std::vector<std::string>& declared) {
    if (body.size() != declared.size()) return false;
    for (const std::string& name : declared) {
        auto it = body.find(name);
        if (it == body.end() || it->second.empty()) return false;
    }
    return true;
}

}  // namespace

nlohmann::json CaptureRecord::to_json() const {
    return {
        {"first_name", first_name},
        {"email", email},
        {"password", password},
        {"tick", tick},
    };
}

CaptureRecord CaptureRecord::from_json(const nlohmann::json& j) {
    CaptureRecord rec;
    rec.first_name = j.at("first_name").get<std::string>();
    rec.email = j.at("email").get<std::string>();
    rec.password = j.at("password").get<std::string>();
    rec.tick = j.at("tick").get<Tick>();
    return rec;
}

void CaptureStore::append(CaptureRecord record) { records_.push_back(std::move(record)); }

jsonl::File CaptureStore::to_jsonl(std::uint64_t seed) const {
    jsonl::File file;
    file.header = {{"schema", 1}, {"seed", seed}};
    for (const CaptureRecord& rec : records_) file.lines.push_back(rec.to_json());
    return file;
}

CaptureStore CaptureStore::from_jsonl(const jsonl::File& file) {
    CaptureStore store;
    for (const auto& line : file.lines) store.append(CaptureRecord::from_json(line));
    return store;
}

std::string to_string(SessionState state) {
    switch (state) {
        case SessionState::kIdle: return "idle";
        case SessionState::kPageServed: return "page_served";
        case SessionState::kModal1Submitted: return "modal1_submitted";
        case SessionState::kCredentialsCaptured: return "credentials_captured";
        case SessionState::kRedirected: return "redirected";
    }
    throw Error("unreachable session state");
}

OverlaySpec AttackConfig::overlay_spec() const {
    OverlaySpec spec;
    spec.displayed_url = displayed_url;
    spec.campaign_heading = campaign_heading;
    spec.form_action = form_action;
    return spec;
}

AttackServer::AttackServer(AttackConfig config, const FixtureStore& fixtures,
                           const ContentGenerator& generator, SimClock& clock,
                           EventLog& events, CaptureStore& captures)
    : config_(std::move(config)),
      fixtures_(fixtures),
      generator_(generator),
      clock_(clock),
      events_(events),
      captures_(captures) {}

Response AttackServer::status_only(int status) const {
    return Response{status, std::nullopt, std::nullopt, clock_.now()};
}

Response AttackServer::handle(const Request& req) {
    const std::string& path = req.url.path;
    if (req.method == "GET" && path == kRouteClaimNow) return claim_now(req);
    if (req.method == "POST" && path == kRouteModal1Submit) return modal1_submit(req);
    if (req.method == "POST" && path == kRouteSaveUser) return save_user(req);
    return status_only(404);
}

Response AttackServer::claim_now(const Request&) {
    if (state_ != SessionState::kIdle) return status_only(409);

    Document captured;
    try {
        captured = capture_page_source(config_.capture_url, fixtures_, clock_);
    } catch (const FixtureMissing&) {
        return status_only(502);
    }
    events_.emit(clock_.now(), Actor::kAttacker, "page_load_wait",
                 {{"ticks", kPageLoadDelayTicks}, {"url", config_.capture_url.display()}});

    // The clone is re-homed: same content, attacker origin.
    captured.source_origin = config_.server.origin();
    clock_.advance(kGeneratorDelayTicks);
    document_ = apply_bitb_settings(captured, config_.overlay_spec(), generator_);
    events_.emit(clock_.now(), Actor::kAttacker, "page_served",
                 {{"displayed_url", config_.displayed_url.display()},
                  {"origin", config_.server.origin().display()}});

    state_ = SessionState::kPageServed;
    return Response{200, document_, std::nullopt, clock_.now()};
}

Response AttackServer::modal1_submit(const Request& req) {
    if (state_ != SessionState::kPageServed) return status_only(409);
    if (!body_well_formed(req.body, {"first_name"})) return status_only(422);
    first_name_ = req.body.at("first_name");

    Document doc = set_modal_state(*document_, "modal1", ModalState::kHidden);
    events_.emit(clock_.now(), Actor::kAttacker, "modal1_hidden", {{"modal", "modal1"}});

    doc = modify_header(doc, *first_name_);
    events_.emit(clock_.now(), Actor::kAttacker, "header_modified",
                 {{"first_name", *first_name_}});

    doc = update_fake_address_bar(doc, config_.signin_display_url);
    events_.emit(clock_.now(), Actor::kAttacker, "address_bar_updated",
                 {{"displayed_url", config_.signin_display_url.display()}});

    auto [run_doc, ticks] = run_fake_progress_bar(doc, clock_);
    events_.emit(clock_.now(), Actor::kAttacker, "progress_run",
                 {{"steps", ticks.size()}, {"final_value", ticks.back().value}});

    document_ = set_modal_state(run_doc, "modal2", ModalState::kVisible);
    events_.emit(clock_.now(), Actor::kAttacker, "modal2_shown", {{"modal", "modal2"}});

    state_ = SessionState::kModal1Submitted;
    return Response{200, document_, std::nullopt, clock_.now()};
}

Response AttackServer::save_user(const Request& req) {
    if (state_ != SessionState::kModal1Submitted) return status_only(409);
    if (!body_well_formed(req.body, {"first_name", "email", "password"})) {
        return status_only(422);
    }

    auto [run_doc, ticks] = run_fake_progress_bar(*document_, clock_);
    events_.emit(clock_.now(), Actor::kAttacker, "progress_run",
                 {{"steps", ticks.size()}, {"final_value", ticks.back().value}});

    document_ = set_modal_state(run_doc, "modal2", ModalState::kHidden);
    events_.emit(clock_.now(), Actor::kAttacker, "modal2_hidden", {{"modal", "modal2"}});

    events_.emit(clock_.now(), Actor::kAttacker, "save_user_post",
                 {{"fields", {"first_name", "email", "password"}},
                  {"route", std::string(kRouteSaveUser)}});

    CaptureRecord record;
    record.first_name = req.body.at("first_name");
    record.email = req.body.at("email");
    record.password = req.body.at("password");
    record.tick = clock_.now();
    captures_.append(std::move(record));
    events_.emit(clock_.now(), Actor::kAttacker, "capture_stored",
                 {{"records", captures_.size()}});

    state_ = SessionState::kCredentialsCaptured;
    Response res{200, document_, config_.redirect_url, clock_.now()};
    state_ = SessionState::kRedirected;
    return res;
}

}  // namespace bitb
