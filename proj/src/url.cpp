#include "bitb/url.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace bitb {
namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (start <= host.size()) {
        std::size_t dot = host.find('.', start);
        if (dot == std::string_view::npos) {
            labels.push_back(host.substr(start));
            break;
        }
        labels.push_back(host.substr(start, dot - start));
        start = dot + 1;
    }
    return labels;
}

// Hostname labels: ASCII letters, digits, hyphens. Everything else (notably
// bytes >= 0x80 and '[') is rejected up front.
void validate_hostname(std::string_view host) {
    for (unsigned char c : host) {
        if (c >= 0x80)
            throw MalformedUrl("internationalized hostnames are not supported: " +
                               std::string(host));
        if (c == '[' || c == ']' || c == ':')
            throw MalformedUrl("IPv6 hosts are not supported: " + std::string(host));
    }
    for (std::string_view label : split_labels(host)) {
        if (label.empty())
            throw MalformedUrl("empty label in host: " + std::string(host));
        for (unsigned char c : label) {
            if (!std::isalnum(c) && c != '-')
                throw MalformedUrl("invalid character in host: " + std::string(host));
        }
    }
}

}  // namespace

std::string Origin::display() const {
    std::ostringstream out;
    out << scheme << "://" << host << ':' << port;
    return out.str();
}

std::string Url::display() const {
    std::ostringstream out;
    out << scheme << "://" << host;
    if (port != default_port(scheme)) out << ':' << port;
    out << path;
    if (query) out << '?' << *query;
    return out.str();
}

int default_port(std::string_view scheme) {
    if (scheme == "http") return 80;
    if (scheme == "https") return 443;
    return 0;
}

Url parse_url(std::string_view text) {
    if (text.empty()) throw MalformedUrl("empty input");

    std::size_t scheme_end = text.find("://");
    if (scheme_end == std::string_view::npos)
        throw MalformedUrl("missing scheme: " + std::string(text));
    std::string scheme = to_lower(text.substr(0, scheme_end));
    if (scheme != "http" && scheme != "https")
        throw MalformedUrl("unsupported scheme: " + scheme);

    std::string_view rest = text.substr(scheme_end + 3);
    std::size_t authority_end = rest.find_first_of("/?");
    std::string_view authority =
        authority_end == std::string_view::npos ? rest : rest.substr(0, authority_end);
    if (authority.empty()) throw MalformedUrl("empty host: " + std::string(text));

    std::string_view host_part = authority;
    int port = default_port(scheme);
    if (std::size_t colon = authority.find(':'); colon != std::string_view::npos) {
        host_part = authority.substr(0, colon);
        std::string_view port_part = authority.substr(colon + 1);
        if (!all_digits(port_part) || port_part.size() > 5)
            throw MalformedUrl("invalid port: " + std::string(authority));
        long value = std::stol(std::string(port_part));
        if (value < 1 || value > 65535)
            throw MalformedUrl("port out of range: " + std::string(port_part));
        port = static_cast<int>(value);
    }
    if (host_part.empty()) throw MalformedUrl("empty host: " + std::string(text));

    std::string host = to_lower(host_part);
    // A host made of digits and dots must be a well-formed IPv4 literal and
    // never falls back to hostname rules.
    bool numeric = std::all_of(host.begin(), host.end(), [](unsigned char c) {
        return std::isdigit(c) || c == '.';
    });
    if (numeric) {
        if (!is_ipv4_literal(host))
            throw MalformedUrl("invalid IPv4 literal: " + host);
    } else {
        validate_hostname(host);
    }

    std::string path = "/";
    std::optional<std::string> query;
    if (authority_end != std::string_view::npos) {
        std::string_view tail = rest.substr(authority_end);
        std::size_t question = tail.find('?');
        std::string_view path_part =
            question == std::string_view::npos ? tail : tail.substr(0, question);
        if (!path_part.empty()) path = std::string(path_part);
        if (path[0] == '?') path = "/";
        if (question != std::string_view::npos)
            query = std::string(tail.substr(question + 1));
    }

    return Url{std::move(scheme), std::move(host), port, std::move(path), std::move(query)};
}

Url normalize(const Url& url) {
    Url out = url;
    out.scheme = to_lower(out.scheme);
    out.host = to_lower(out.host);
    if (out.port == 0) out.port = default_port(out.scheme);
    if (out.path.empty()) out.path = "/";
    return out;
}

bool is_ipv4_literal(std::string_view host) {
    return parse_ipv4(host).has_value();
}

std::optional<std::array<std::uint8_t, 4>> parse_ipv4(std::string_view host) {
    auto labels = split_labels(host);
    if (labels.size() != 4) return std::nullopt;
    std::array<std::uint8_t, 4> octets{};
    for (std::size_t i = 0; i < 4; ++i) {
        std::string_view label = labels[i];
        if (!all_digits(label) || label.size() > 3) return std::nullopt;
        if (label.size() > 1 && label[0] == '0') return std::nullopt;
        int value = std::stoi(std::string(label));
        if (value > 255) return std::nullopt;
        octets[i] = static_cast<std::uint8_t>(value);
    }
    return octets;
}

bool is_private_address(std::string_view host) {
    std::string lowered = to_lower(host);
    if (lowered == "localhost") return true;
    auto octets = parse_ipv4(lowered);
    if (!octets) return false;
    const auto& o = *octets;
    if (o[0] == 10) return true;
    if (o[0] == 172 && o[1] >= 16 && o[1] <= 31) return true;
    if (o[0] == 192 && o[1] == 168) return true;
    return false;
}

SuffixList SuffixList::builtin() {
    SuffixList list;
    list.suffixes_ = {"com", "org", "net", "edu", "co.uk", "com.au"};
    return list;
}

SuffixList SuffixList::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open suffix list: " + file.string());
    SuffixList list;
    std::string line;
    while (std::getline(in, line)) {
        if (std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        // trim
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        std::string suffix = to_lower(std::string_view(line).substr(begin, end - begin + 1));
        if (!suffix.empty()) list.suffixes_.push_back(std::move(suffix));
    }
    return list;
}

bool SuffixList::contains(std::string_view suffix) const {
    return std::find(suffixes_.begin(), suffixes_.end(), suffix) != suffixes_.end();
}

std::string SuffixList::registrable_domain(std::string_view host) const {
    std::string lowered = to_lower(host);
    if (is_ipv4_literal(lowered))
        throw NotAHostname("IP literals have no registrable domain: " + lowered);

    auto matches = [&](std::string_view suffix) {
        if (lowered == suffix) return true;
        return lowered.size() > suffix.size() + 1 &&
               lowered[lowered.size() - suffix.size() - 1] == '.' &&
               std::string_view(lowered).substr(lowered.size() - suffix.size()) == suffix;
    };

    std::string_view best;
    for (const std::string& suffix : suffixes_) {
        if (matches(suffix) && suffix.size() > best.size()) best = suffix;
    }
    if (best.empty()) {
        // Unknown registry: treat the last label as the suffix.
        std::size_t last_dot = lowered.rfind('.');
        if (last_dot == std::string::npos) return lowered;
        best = std::string_view(lowered).substr(last_dot + 1);
    }
    if (lowered.size() == best.size()) return lowered;

    std::size_t suffix_start = lowered.size() - best.size();
    std::size_t label_end = suffix_start - 1;  // the dot before the suffix
    std::size_t prev_dot = lowered.rfind('.', label_end - 1);
    std::size_t begin = (label_end == 0 || prev_dot == std::string::npos) ? 0 : prev_dot + 1;
    return lowered.substr(begin);
}

}  // namespace bitb
