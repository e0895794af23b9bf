#pragma once

// The overlay pipeline: takes a captured document and decorates it with the
// fake chrome (address bar, progress bar, heading) and the two popup modals.
// Fragment content comes from a pluggable generator; the shipped one is a
// deterministic template engine, so the same inputs always forge the same
// bytes.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitb/page.hpp"
#include "bitb/sim.hpp"
#include "bitb/url.hpp"

namespace bitb {

// Node roles the pipeline stamps on its fragments. The detector never reads
// these; they exist so later pipeline stages can find their own handiwork.
inline constexpr std::string_view kRoleAddressBar = "address-bar";
inline constexpr std::string_view kRoleProgressBar = "progress-bar";
inline constexpr std::string_view kRoleHeading = "campaign-heading";

inline constexpr std::string_view kPartAddressBar = "address_bar";
inline constexpr std::string_view kPartProgressBar = "progress_bar";
inline constexpr std::string_view kPartHeading = "heading";
inline constexpr std::string_view kPartModal1 = "modal1";
inline constexpr std::string_view kPartModal2 = "modal2";

inline constexpr int kProgressSteps = 10;

struct FormField {
    std::string name;
    std::string role;  // "text" | "email" | "password"
};

struct OverlaySpec {
    Url displayed_url;         // what the fake bar shows
    std::string campaign_heading;
    std::vector<FormField> modal1_fields = {{"first_name", "text"}};
    std::vector<FormField> modal2_fields = {{"email", "email"}, {"password", "password"}};
    Url form_action;           // where modal 2 posts

    void validate() const;  // ConfigError on a spec the pipeline cannot honor
};

class ContentGenerator {
  public:
    virtual ~ContentGenerator() = default;
    // part is one of the kPart* tokens. Every node of the returned fragment
    // must carry sandbox_watermark="true".
    virtual Node generate(const OverlaySpec& spec, std::string_view part) const = 0;
};

// Loads one JSON node tree per part from a directory and substitutes
// {{placeholder}} tokens in text and attribute values.
class TemplateGenerator : public ContentGenerator {
  public:
    explicit TemplateGenerator(const std::filesystem::path& dir);
    Node generate(const OverlaySpec& spec, std::string_view part) const override;

  private:
    std::map<std::string, Node, std::less<>> templates_;
};

struct ProgressTick {
    Tick tick = 0;
    int value = 0;
};

Document apply_bitb_settings(const Document& doc, const OverlaySpec& spec,
                             const ContentGenerator& gen);
Document update_fake_address_bar(const Document& doc, const Url& new_url);
std::pair<Document, std::vector<ProgressTick>> run_fake_progress_bar(const Document& doc,
                                                                     SimClock& clock);
Document modify_header(const Document& doc, const std::string& first_name);

enum class ModalState { kVisible, kHidden };
Document set_modal_state(const Document& doc, std::string_view which, ModalState state);
bool modal_visible(const Document& doc, std::string_view which);

}  // namespace bitb
