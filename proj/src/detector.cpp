#include "bitb/detector.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "bitb/errors.hpp"
#include "bitb/url.hpp"

namespace bitb {
namespace {

constexpr std::array<int, 5> kWeightNums = {3, 2, 3, 1, 1};  // over 10
constexpr int kFullDen = 10;

std::optional<Url> text_as_url(const Node& node) {
    if (!node.text) return std::nullopt;
    try {
        return parse_url(*node.text);
    } catch (const MalformedUrl&) {
        return std::nullopt;
    }
}

bool in_top_band(const Node& node) {
    return node.layout && node.layout->y >= 0 && node.layout->bottom() <= kTopBandLimit;
}

// The "looks like an address bar" test: URL text, top band, wide enough.
bool bar_shaped(const Node& node) {
    return in_top_band(node) && node.layout->w >= kMinBarWidth && text_as_url(node);
}

struct PlacedNode {
    const Node* node;
    std::set<const Node*> ancestry;  // self plus ancestors, by address
};

// Visible nodes with layout, pre-order, each carrying its ancestor set.
std::vector<PlacedNode> placed_visible(const Document& doc) {
    std::vector<PlacedNode> out;
    std::function<void(const Node&, std::set<const Node*>)> visit =
        [&](const Node& node, std::set<const Node*> path) {
            if (node.attr("hidden") == "true") return;
            path.insert(&node);
            if (node.layout) out.push_back({&node, path});
            for (const Node& child : node.children) visit(child, path);
        };
    visit(doc.root, {});
    return out;
}

const Node* first_password_input(const Node& form) {
    if (form.tag == "input" && form.attr("type") == "password") return &form;
    for (const Node& child : form.children) {
        if (const Node* hit = first_password_input(child)) return hit;
    }
    return nullptr;
}

std::optional<Origin> form_action_origin(const Node& form, const Origin& source) {
    const std::string action = form.attr("action");
    if (action.empty() || action[0] == '/') return source;  // relative post
    try {
        return parse_url(action).origin();
    } catch (const MalformedUrl&) {
        return std::nullopt;
    }
}

bool password_named(const std::string& field) {
    std::string low = field;
    for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return low == "password" || low == "passwd" || low == "pwd";
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 14695981039346656037ull;
    for (char ch : data) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 1099511628211ull;
    }
    return hash;
}

nlohmann::json Signature::to_json() const {
    nlohmann::json j = {
        {"id", id},
        {"fired", fired},
        {"weight", weight()},
        {"evidence", evidence},
    };
    if (skipped) j["skipped"] = true;
    return j;
}

nlohmann::json DetectionReport::to_json() const {
    nlohmann::json sigs = nlohmann::json::array();
    for (const Signature& s : signatures) sigs.push_back(s.to_json());
    return {
        {"score", score()},
        {"verdict", verdict},
        {"signatures", sigs},
        {"inputs_digest", inputs_digest},
    };
}

Signature detect_s1_displayed_origin_mismatch(const Document& doc) {
    Signature sig;
    sig.id = "S1";
    for (const Node* node : visible_nodes(doc)) {
        if (!bar_shaped(*node)) continue;
        const Origin shown = text_as_url(*node)->origin();
        if (!(shown == doc.source_origin)) {
            sig.fired = true;
            sig.evidence.push_back(node->id);
        }
    }
    return sig;
}

Signature detect_s2_chrome_mimicry(const Document& doc) {
    Signature sig;
    sig.id = "S2";

    const Node* url_in_band = nullptr;
    for (const Node* node : visible_nodes(doc)) {
        if (in_top_band(*node) && text_as_url(*node)) {
            url_in_band = node;
            break;
        }
    }
    if (!url_in_band) return sig;

    const std::vector<PlacedNode> placed = placed_visible(doc);
    for (std::size_t i = 0; i < placed.size() && !sig.fired; ++i) {
        for (std::size_t j = i + 1; j < placed.size(); ++j) {
            const bool related = placed[i].ancestry.count(placed[j].node) ||
                                 placed[j].ancestry.count(placed[i].node);
            if (related) continue;
            if (intersection_area(*placed[i].node->layout, *placed[j].node->layout) > 0) {
                sig.fired = true;
                sig.evidence = {url_in_band->id, placed[i].node->id, placed[j].node->id};
                break;
            }
        }
    }
    return sig;
}

Signature detect_s3_cross_origin_credential_form(const Document& doc) {
    Signature sig;
    sig.id = "S3";

    // What the page claims its address is: the bar if one exists, otherwise
    // the true source. Hidden forms still count; a concealed credential form
    // is no less a credential form.
    Origin claimed = doc.source_origin;
    for (const Node* node : visible_nodes(doc)) {
        if (bar_shaped(*node)) {
            claimed = text_as_url(*node)->origin();
            break;
        }
    }

    for (const Node* form : query(doc, [](const Node& n) { return n.tag == "form"; })) {
        const Node* password = first_password_input(*form);
        if (!password) continue;
        const std::optional<Origin> target = form_action_origin(*form, doc.source_origin);
        if (!target) continue;
        if (!(*target == claimed)) {
            sig.fired = true;
            sig.evidence.push_back(form->id);
            sig.evidence.push_back(password->id);
        }
    }
    return sig;
}

Signature detect_s4_mutable_indirection(const ScanChain& chain) {
    if (chain.scans.empty()) throw EmptyChain("scan chain has no scan events");
    Signature sig;
    sig.id = "S4";

    for (std::size_t i = 0; i < chain.record.edits.size(); ++i) {
        sig.fired = true;
        sig.evidence.push_back("edit:" + std::to_string(i));
    }
    const std::size_t last = chain.scans.size() - 1;
    if (is_private_address(chain.scans[last].resolved_target.host)) {
        sig.fired = true;
        sig.evidence.push_back("scan:" + std::to_string(last));
    }
    return sig;
}

Signature detect_s5_post_submit_legit_redirect(const std::vector<TraceEntry>& trace) {
    Signature sig;
    sig.id = "S5";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceEntry& post = trace[i];
        if (post.method != "POST") continue;
        const bool carries_password =
            std::any_of(post.body_fields.begin(), post.body_fields.end(), password_named);
        if (!carries_password) continue;
        for (std::size_t j = i + 1; j < trace.size(); ++j) {
            const TraceEntry& nav = trace[j];
            if (nav.method != "GET") continue;
            if (nav.initiator != "user" && nav.initiator != "redirect") continue;
            if (nav.origin() == post.origin()) continue;
            if (is_private_address(nav.url.host)) continue;
            sig.fired = true;
            sig.evidence = {"trace:" + std::to_string(i), "trace:" + std::to_string(j)};
            return sig;
        }
    }
    return sig;
}

std::pair<int, int> weighted_score(const std::array<bool, 5>& fired, bool s4_present) {
    int num = 0;
    int den = kFullDen;
    if (!s4_present) den -= kWeightNums[3];
    for (std::size_t i = 0; i < fired.size(); ++i) {
        if (i == 3 && !s4_present) continue;
        if (fired[i]) num += kWeightNums[i];
    }
    return {num, den};
}

DetectionReport analyze(const Document& doc, const std::vector<TraceEntry>& trace,
                        const std::optional<ScanChain>& chain) {
    DetectionReport report;
    report.signatures.push_back(detect_s1_displayed_origin_mismatch(doc));
    report.signatures.push_back(detect_s2_chrome_mimicry(doc));
    report.signatures.push_back(detect_s3_cross_origin_credential_form(doc));

    bool s4_present = false;
    if (chain) {
        try {
            report.signatures.push_back(detect_s4_mutable_indirection(*chain));
            s4_present = true;
        } catch (const EmptyChain&) {
            // fall through to the skipped placeholder
        }
    }
    if (!s4_present) {
        Signature skipped;
        skipped.id = "S4";
        skipped.skipped = true;
        report.signatures.push_back(std::move(skipped));
    }
    report.signatures.push_back(detect_s5_post_submit_legit_redirect(trace));

    std::array<bool, 5> fired{};
    for (std::size_t i = 0; i < 5; ++i) fired[i] = report.signatures[i].fired;
    const auto [num, den] = weighted_score(fired, s4_present);
    report.score_num = num;
    report.score_den = den;
    for (std::size_t i = 0; i < 5; ++i) {
        if (i == 3 && !s4_present) continue;  // skipped keeps weight 0
        report.signatures[i].weight_num = kWeightNums[i];
        report.signatures[i].weight_den = den;
    }

    // verdict: suspicious iff score >= 1/2, in exact arithmetic
    report.verdict = 2 * num >= den ? "suspicious" : "benign";

    std::ostringstream inputs;
    inputs << serialize(doc) << '\n';
    for (const TraceEntry& entry : trace) inputs << entry.to_json().dump() << '\n';
    if (chain) {
        inputs << chain->record.to_json().dump() << '\n';
        for (const ScanEvent& scan : chain->scans) inputs << scan.to_json().dump() << '\n';
    } else {
        inputs << "no_chain\n";
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(inputs.str());
    report.inputs_digest = hex.str();

    return report;
}

}  // namespace bitb
