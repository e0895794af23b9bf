#pragma once

// Document trees with abstract layout hints. No HTML, no CSS: a node carries
// an optional Rect in a fixed 1000x1000 viewport and that is all the geometry
// the overlay and detector code ever see. A FixtureStore plays the part of
// the automated browser, handing out deep copies of synthetic pages.

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitb/sim.hpp"
#include "bitb/url.hpp"

namespace bitb {

inline constexpr int kViewportSize = 1000;
inline constexpr Tick kPageLoadDelayTicks = 5;

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

// Area of overlap, 0 when the rects only touch or are disjoint.
int intersection_area(const Rect& a, const Rect& b);

struct Node {
    std::string id;
    std::string tag;
    std::map<std::string, std::string> attrs;
    std::optional<std::string> text;
    std::optional<Rect> layout;
    std::vector<Node> children;

    std::string attr(std::string_view name) const;  // "" when absent

    nlohmann::json to_json() const;
    static Node from_json(const nlohmann::json& j);
};

struct Document {
    Node root;
    Origin source_origin;

    nlohmann::json to_json() const;
    static Document from_json(const nlohmann::json& j);
};

// Throws MalformedSnapshot on duplicate ids, out-of-viewport layout, or
// children under an input node.
void validate(const Document& doc);

std::vector<const Node*> query(const Document& doc,
                               const std::function<bool(const Node&)>& pred);
const Node* find_by_id(const Document& doc, std::string_view id);
Node* find_by_id(Node& root, std::string_view id);

// Pre-order traversal that skips any subtree whose root carries
// hidden="true". A node is on-screen iff it appears here.
std::vector<const Node*> visible_nodes(const Document& doc);

std::string serialize(const Document& doc);
Document deserialize(std::string_view bytes);

class FixtureStore {
  public:
    // The shipped-fixture contract: file holds a bare node tree whose root is
    // watermarked. ConfigError if the file is unreadable or unwatermarked.
    void load_file(const Url& url, const std::filesystem::path& path);
    void add(const Url& url, Node root);

    bool has(const Url& url) const;
    std::size_t size() const { return fixtures_.size(); }
    std::vector<Url> urls() const;

    // Deep copy with source_origin set from the lookup url. FixtureMissing
    // if the url was never loaded.
    Document capture(const Url& url) const;

  private:
    std::map<std::string, std::pair<Url, Node>> fixtures_;  // keyed by display()
};

// The "waits until page loads" step: advances the clock, then captures.
Document capture_page_source(const Url& url, const FixtureStore& store, SimClock& clock,
                             Tick load_delay = kPageLoadDelayTicks);

}  // namespace bitb
