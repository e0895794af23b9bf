#include "bitb/forgery.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "bitb/errors.hpp"

namespace bitb {
namespace {

Node* find_by_attr(Node& root, std::string_view name, std::string_view value) {
    if (root.attr(name) == value) return &root;
    for (Node& child : root.children) {
        if (Node* hit = find_by_attr(child, name, value)) return hit;
    }
    return nullptr;
}

void stamp_watermark(Node& node) {
    node.attrs["sandbox_watermark"] = "true";
    for (Node& child : node.children) stamp_watermark(child);
}

bool fully_watermarked(const Node& node) {
    if (node.attr("sandbox_watermark") != "true") return false;
    for (const Node& child : node.children) {
        if (!fully_watermarked(child)) return false;
    }
    return true;
}

std::string substitute(const std::string& input,
                       const std::map<std::string, std::string>& values) {
    std::string out;
    std::size_t pos = 0;
    while (pos < input.size()) {
        const std::size_t open = input.find("{{", pos);
        if (open == std::string::npos) {
            out.append(input, pos, std::string::npos);
            break;
        }
        const std::size_t close = input.find("}}", open + 2);
        if (close == std::string::npos) {
            throw GeneratorFailure("unterminated placeholder in template text");
        }
        out.append(input, pos, open - pos);
        const std::string key = input.substr(open + 2, close - open - 2);
        auto it = values.find(key);
        if (it == values.end()) {
            throw GeneratorFailure("template references unknown placeholder '" + key + "'");
        }
        out.append(it->second);
        pos = close + 2;
    }
    return out;
}

void substitute_tree(Node& node, const std::map<std::string, std::string>& values) {
    for (auto& [name, value] : node.attrs) value = substitute(value, values);
    if (node.text) node.text = substitute(*node.text, values);
    for (Node& child : node.children) substitute_tree(child, values);
}

}  // namespace

void OverlaySpec::validate() const {
    int passwords = 0;
    for (const FormField& f : modal1_fields) {
        if (f.name.empty()) throw ConfigError("modal1 field with empty name");
    }
    for (const FormField& f : modal2_fields) {
        if (f.name.empty()) throw ConfigError("modal2 field with empty name");
        if (f.role == "password") ++passwords;
    }
    if (passwords != 1) {
        throw ConfigError("modal2 must carry exactly one password-role field, got " +
                          std::to_string(passwords));
    }
}

TemplateGenerator::TemplateGenerator(const std::filesystem::path& dir) {
    for (std::string_view part : {kPartAddressBar, kPartProgressBar, kPartHeading,
                                  kPartModal1, kPartModal2}) {
        const std::filesystem::path file = dir / (std::string(part) + ".json");
        std::ifstream in(file, std::ios::binary);
        if (!in) throw ConfigError("cannot open template " + file.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            templates_.emplace(std::string(part),
                               Node::from_json(nlohmann::json::parse(buf.str())));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(file.string() + ": " + e.what());
        }
    }
}

Node TemplateGenerator::generate(const OverlaySpec& spec, std::string_view part) const {
    auto it = templates_.find(part);
    if (it == templates_.end()) {
        throw GeneratorFailure("no template for part '" + std::string(part) + "'");
    }
    if (spec.modal1_fields.size() != 1) {
        throw GeneratorFailure("modal1 template expects 1 field, spec has " +
                               std::to_string(spec.modal1_fields.size()));
    }
    if (spec.modal2_fields.size() != 2) {
        throw GeneratorFailure("modal2 template expects 2 fields, spec has " +
                               std::to_string(spec.modal2_fields.size()));
    }

    const std::map<std::string, std::string> values = {
        {"displayed_url", spec.displayed_url.display()},
        {"campaign_heading", spec.campaign_heading},
        {"form_action", spec.form_action.display()},
        {"modal1_field_0", spec.modal1_fields[0].name},
        {"modal1_field_0_type", spec.modal1_fields[0].role},
        {"modal2_field_0", spec.modal2_fields[0].name},
        {"modal2_field_0_type", spec.modal2_fields[0].role},
        {"modal2_field_1", spec.modal2_fields[1].name},
        {"modal2_field_1_type", spec.modal2_fields[1].role},
    };

    Node fragment = it->second;  // deep copy, template stays pristine
    substitute_tree(fragment, values);
    stamp_watermark(fragment);
    return fragment;
}

Document apply_bitb_settings(const Document& doc, const OverlaySpec& spec,
                             const ContentGenerator& gen) {
    if (doc.root.attr("bitb_settings") == "applied") {
        throw DoubleForgery("document already carries the overlay");
    }
    spec.validate();

    Node root;
    root.id = "bitb-root";
    root.tag = "page";
    root.attrs["sandbox_watermark"] = "true";
    root.attrs["bitb_settings"] = "applied";
    for (std::string_view part : {kPartAddressBar, kPartProgressBar, kPartHeading,
                                  kPartModal1, kPartModal2}) {
        Node fragment = gen.generate(spec, part);
        if (!fully_watermarked(fragment)) {
            throw GeneratorFailure("generator emitted unwatermarked node in part '" +
                                   std::string(part) + "'");
        }
        root.children.push_back(std::move(fragment));
    }
    root.children.push_back(doc.root);  // original content preserved beneath

    Document forged{std::move(root), doc.source_origin};
    validate(forged);
    return forged;
}

Document update_fake_address_bar(const Document& doc, const Url& new_url) {
    Document out = doc;
    Node* bar = find_by_attr(out.root, "role", kRoleAddressBar);
    if (!bar) throw NoAddressBar("document has no address-bar node");
    bar->text = normalize(new_url).display();
    return out;
}

std::pair<Document, std::vector<ProgressTick>> run_fake_progress_bar(const Document& doc,
                                                                     SimClock& clock) {
    Document out = doc;
    Node* bar = find_by_attr(out.root, "role", kRoleProgressBar);
    if (!bar) throw NoProgressBar("document has no progress-bar node");
    std::vector<ProgressTick> ticks;
    ticks.reserve(kProgressSteps);
    for (int step = 1; step <= kProgressSteps; ++step) {
        clock.advance(1);
        const int value = step * 100 / kProgressSteps;
        bar->attrs["value"] = std::to_string(value);
        ticks.push_back(ProgressTick{clock.now(), value});
    }
    return {std::move(out), std::move(ticks)};
}

Document modify_header(const Document& doc, const std::string& first_name) {
    if (first_name.empty()) throw EmptyField("first_name must be non-empty");
    Document out = doc;
    Node* heading = find_by_attr(out.root, "role", kRoleHeading);
    if (!heading) throw NoHeading("document has no campaign-heading node");
    heading->text = heading->text.value_or("") + " for " + first_name;
    return out;
}

Document set_modal_state(const Document& doc, std::string_view which, ModalState state) {
    Document out = doc;
    Node* modal = find_by_attr(out.root, "modal", which);
    if (!modal) throw NoSuchModal("document has no modal '" + std::string(which) + "'");
    if (state == ModalState::kVisible) {
        const std::string other = which == "modal1" ? "modal2" : "modal1";
        const Node* sibling = find_by_attr(out.root, "modal", other);
        if (sibling && sibling->attr("hidden") != "true") {
            throw BothVisible("modal '" + other + "' is still visible");
        }
    }
    modal->attrs["hidden"] = state == ModalState::kHidden ? "true" : "false";
    return out;
}

bool modal_visible(const Document& doc, std::string_view which) {
    const Node* modal = nullptr;
    auto hits = query(doc, [&](const Node& n) { return n.attr("modal") == which; });
    if (!hits.empty()) modal = hits.front();
    if (!modal) throw NoSuchModal("document has no modal '" + std::string(which) + "'");
    return modal->attr("hidden") != "true";
}

}  // namespace bitb
