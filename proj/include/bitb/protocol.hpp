#pragma once

// Attacker-side state machine. Requests are plain structs handed to
// AttackServer::handle; nothing here opens a socket. The three routes mirror
// the campaign flow: serve the forged page, swap the modals on the first
// submit, store credentials and bounce the victim on the second.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitb/forgery.hpp"
#include "bitb/jsonl.hpp"
#include "bitb/page.hpp"
#include "bitb/sim.hpp"
#include "bitb/url.hpp"

namespace bitb {

// Stand-in for the content service round trip when a page gets forged.
inline constexpr Tick kGeneratorDelayTicks = 2;

inline constexpr std::string_view kRouteClaimNow = "/claim-now";
inline constexpr std::string_view kRouteModal1Submit = "/modal1-submit";
inline constexpr std::string_view kRouteSaveUser = "/api/save-user";

struct Request {
    std::string method;  // "GET" | "POST"
    Url url;
    std::map<std::string, std::string> body;
    std::string initiator = "user";  // "user" | "script" | "redirect"
    Tick tick = 0;
};

struct Response {
    int status = 0;
    std::optional<Document> document;
    std::optional<Url> redirect_to;
    Tick tick = 0;

    bool ok() const { return status == 200; }
};

struct CaptureRecord {
    std::string first_name;
    std::string email;
    std::string password;
    Tick tick = 0;

    nlohmann::json to_json() const;
    static CaptureRecord from_json(const nlohmann::json& j);
};

class CaptureStore {
  public:
    void append(CaptureRecord record);
    const std::vector<CaptureRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    // Header line records the scenario seed the values were derived from.
    jsonl::File to_jsonl(std::uint64_t seed) const;
    static CaptureStore from_jsonl(const jsonl::File& file);

  private:
    std::vector<CaptureRecord> records_;
};

enum class SessionState { kIdle, kPageServed, kModal1Submitted, kCredentialsCaptured, kRedirected };

std::string to_string(SessionState state);

struct AttackConfig {
    Url server;              // origin the victim actually talks to
    Url capture_url;         // page cloned into the forgery
    Url displayed_url;       // what the fake bar claims at first
    Url signin_display_url;  // what the bar claims after modal 1
    Url redirect_url;        // where the victim lands after capture
    Url form_action;         // where modal 2 posts
    std::string campaign_heading;

    OverlaySpec overlay_spec() const;
};

class AttackServer {
  public:
    AttackServer(AttackConfig config, const FixtureStore& fixtures,
                 const ContentGenerator& generator, SimClock& clock, EventLog& events,
                 CaptureStore& captures);

    // Routes by (method, path); unknown pairs get 404. Handlers never throw
    // on bad requests, they answer with an error status and leave the
    // session untouched.
    Response handle(const Request& req);

    SessionState state() const { return state_; }
    const std::optional<Document>& document() const { return document_; }

  private:
    Response claim_now(const Request& req);
    Response modal1_submit(const Request& req);
    Response save_user(const Request& req);
    Response status_only(int status) const;

    AttackConfig config_;
    const FixtureStore& fixtures_;
    const ContentGenerator& generator_;
    SimClock& clock_;
    EventLog& events_;
    CaptureStore& captures_;

    SessionState state_ = SessionState::kIdle;
    std::optional<Document> document_;
    std::optional<std::string> first_name_;
};

}  // namespace bitb
