#pragma once

// URL grammar, normalization, and origin semantics shared by every module.
// The grammar is deliberately narrow: http/https schemes, ASCII hostnames or
// IPv4 literals, explicit ports 1-65535. No IPv6, no IDN, no percent
// decoding; path and query are passed through verbatim.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitb/errors.hpp"

namespace bitb {

// The (scheme, host, port) triple identifying where content was actually
// served from. Two origins are equal iff all three fields match after
// normalization.
struct Origin {
    std::string scheme;
    std::string host;
    int port = 0;

    bool operator==(const Origin&) const = default;

    // Explicit-port form, e.g. "https://www.youtube.com:443".
    std::string display() const;
};

struct Url {
    std::string scheme;               // "http" | "https"
    std::string host;                 // lowercase hostname or IPv4 literal
    int port = 0;                     // always explicit after normalization
    std::string path = "/";           // slash-rooted
    std::optional<std::string> query; // without the leading '?'

    bool operator==(const Url&) const = default;

    Origin origin() const { return Origin{scheme, host, port}; }

    // Display form: default ports elided, e.g. "https://www.youtube.com/premium".
    std::string display() const;
};

// Parses and normalizes. Throws MalformedUrl on missing scheme, empty host,
// port out of range, IPv6 or non-ASCII hosts.
Url parse_url(std::string_view text);

// Idempotent: normalize(normalize(u)) == normalize(u). parse_url output is
// already in normal form.
Url normalize(const Url& url);

int default_port(std::string_view scheme);

bool is_ipv4_literal(std::string_view host);
std::optional<std::array<std::uint8_t, 4>> parse_ipv4(std::string_view host);

// True for RFC1918 IPv4 ranges (10/8, 172.16/12, 192.168/16) and the
// hostname "localhost"; false otherwise.
bool is_private_address(std::string_view host);

// Fixed, shipped public-suffix list: one suffix per line, UTF-8, '#' comments.
// Not a live public-suffix fetch; determinism over completeness.
class SuffixList {
  public:
    // The suffixes every shipped copy of the list contains.
    static SuffixList builtin();
    static SuffixList load(const std::filesystem::path& file);

    // Strips subdomains down to the owner domain ("www.youtube.com" ->
    // "youtube.com"). A host that is itself a suffix comes back unchanged;
    // a host under no known suffix falls back to its last two labels.
    // Throws NotAHostname for IPv4 literals.
    std::string registrable_domain(std::string_view host) const;

    bool contains(std::string_view suffix) const;
    const std::vector<std::string>& suffixes() const { return suffixes_; }

  private:
    std::vector<std::string> suffixes_;  // lowercase, longest-match wins
};

}  // namespace bitb
