#include "bitb/page.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "bitb/errors.hpp"

namespace bitb {
namespace {

void walk(const Node& node, const std::function<bool(const Node&)>& pred,
          std::vector<const Node*>& out) {
    if (pred(node)) out.push_back(&node);
    for (const Node& child : node.children) walk(child, pred, out);
}

void check_tree(const Node& node, std::set<std::string>& seen) {
    if (node.id.empty()) throw MalformedSnapshot("node with empty id");
    if (!seen.insert(node.id).second) {
        throw MalformedSnapshot("duplicate node id '" + node.id + "'");
    }
    if (node.layout) {
        const Rect& r = *node.layout;
        if (r.w < 0 || r.h < 0 || r.x < 0 || r.y < 0 || r.right() > kViewportSize ||
            r.bottom() > kViewportSize) {
            throw MalformedSnapshot("node '" + node.id + "' layout outside viewport");
        }
    }
    if (node.tag == "input" && !node.children.empty()) {
        throw MalformedSnapshot("input node '" + node.id + "' has children");
    }
    for (const Node& child : node.children) check_tree(child, seen);
}

Rect rect_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) {
        throw MalformedSnapshot("layout must be [x,y,w,h]");
    }
    return Rect{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

}  // namespace

int intersection_area(const Rect& a, const Rect& b) {
    const int w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    const int h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (w <= 0 || h <= 0) return 0;
    return w * h;
}

std::string Node::attr(std::string_view name) const {
    auto it = attrs.find(std::string(name));
    return it == attrs.end() ? std::string() : it->second;
}

nlohmann::json Node::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["tag"] = tag;
    j["attrs"] = attrs;
    if (text) j["text"] = *text;
    if (layout) j["layout"] = {layout->x, layout->y, layout->w, layout->h};
    nlohmann::json kids = nlohmann::json::array();
    for (const Node& child : children) kids.push_back(child.to_json());
    j["children"] = std::move(kids);
    return j;
}

Node Node::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw MalformedSnapshot("node must be a JSON object");
    Node node;
    try {
        node.id = j.at("id").get<std::string>();
        node.tag = j.at("tag").get<std::string>();
        if (j.contains("attrs")) {
            node.attrs = j["attrs"].get<std::map<std::string, std::string>>();
        }
        if (j.contains("text")) node.text = j["text"].get<std::string>();
        if (j.contains("layout")) node.layout = rect_from_json(j["layout"]);
        if (j.contains("children")) {
            for (const auto& child : j["children"]) {
                node.children.push_back(Node::from_json(child));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedSnapshot(std::string("bad node field: ") + e.what());
    }
    return node;
}

nlohmann::json Document::to_json() const {
    return {
        {"schema", 1},
        {"source_origin",
         {{"scheme", source_origin.scheme},
          {"host", source_origin.host},
          {"port", source_origin.port}}},
        {"root", root.to_json()},
    };
}

Document Document::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != 1) {
        throw MalformedSnapshot("document missing schema marker");
    }
    Document doc;
    try {
        const auto& o = j.at("source_origin");
        doc.source_origin.scheme = o.at("scheme").get<std::string>();
        doc.source_origin.host = o.at("host").get<std::string>();
        doc.source_origin.port = o.at("port").get<std::uint16_t>();
        doc.root = Node::from_json(j.at("root"));
    } catch (const nlohmann::json::exception& e) {
        throw MalformedSnapshot(std::string("bad document field: ") + e.what());
    }
    return doc;
}

void validate(const Document& doc) {
    std::set<std::string> seen;
    check_tree(doc.root, seen);
}

std::vector<const Node*> query(const Document& doc,
                               const std::function<bool(const Node&)>& pred) {
    std::vector<const Node*> out;
    walk(doc.root, pred, out);
    return out;
}

namespace {

void walk_visible(const Node& node, std::vector<const Node*>& out) {
    if (node.attr("hidden") == "true") return;
    out.push_back(&node);
    for (const Node& child : node.children) walk_visible(child, out);
}

}  // namespace

std::vector<const Node*> visible_nodes(const Document& doc) {
    std::vector<const Node*> out;
    walk_visible(doc.root, out);
    return out;
}

const Node* find_by_id(const Document& doc, std::string_view id) {
    auto hits = query(doc, [&](const Node& n) { return n.id == id; });
    return hits.empty() ? nullptr : hits.front();
}

Node* find_by_id(Node& root, std::string_view id) {
    if (root.id == id) return &root;
    for (Node& child : root.children) {
        if (Node* hit = find_by_id(child, id)) return hit;
    }
    return nullptr;
}

std::string serialize(const Document& doc) { return doc.to_json().dump(); }

Document deserialize(std::string_view bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedSnapshot(std::string("unparseable snapshot: ") + e.what());
    }
    Document doc = Document::from_json(j);
    validate(doc);
    return doc;
}

void FixtureStore::load_file(const Url& url, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open fixture " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    Node root = Node::from_json(j);
    if (root.attr("sandbox_watermark") != "true") {
        throw ConfigError(path.string() + ": fixture root is not watermarked");
    }
    add(url, std::move(root));
}

void FixtureStore::add(const Url& url, Node root) {
    const Url canonical = normalize(url);
    {
        Document probe{root, canonical.origin()};
        validate(probe);
    }
    fixtures_[canonical.display()] = {canonical, std::move(root)};
}

bool FixtureStore::has(const Url& url) const {
    return fixtures_.count(normalize(url).display()) != 0;
}

std::vector<Url> FixtureStore::urls() const {
    std::vector<Url> out;
    for (const auto& [key, value] : fixtures_) out.push_back(value.first);
    return out;
}

Document FixtureStore::capture(const Url& url) const {
    auto it = fixtures_.find(normalize(url).display());
    if (it == fixtures_.end()) {
        throw FixtureMissing("no fixture for " + normalize(url).display());
    }
    return Document{it->second.second, it->second.first.origin()};
}

Document capture_page_source(const Url& url, const FixtureStore& store, SimClock& clock,
                             Tick load_delay) {
    if (!store.has(url)) {
        throw FixtureMissing("no fixture for " + normalize(url).display());
    }
    clock.advance(load_delay);
    return store.capture(url);
}

}  // namespace bitb
