#pragma once

// Deterministic generators for property-style tests. mt19937_64 raw output
// is fully specified by the standard; the helpers below avoid
// std::uniform_*_distribution, whose mapping is implementation-defined.

#include <cstdint>
#include <random>
#include <string>

#include "bitb/url.hpp"

namespace bitb::testing {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

  private:
    std::mt19937_64 engine_;
};

inline std::string random_label(Rng& rng) {
    static const char kAlpha[] = "abcdefghijklmnopqrstuvwxyz";
    static const char kAlnum[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string label(1, kAlpha[rng.below(26)]);
    int extra = rng.range(0, 7);
    for (int i = 0; i < extra; ++i) label += kAlnum[rng.below(36)];
    return label;
}

inline std::string random_host(Rng& rng) {
    if (rng.chance(0.4)) {
        return std::to_string(rng.below(256)) + '.' + std::to_string(rng.below(256)) + '.' +
               std::to_string(rng.below(256)) + '.' + std::to_string(rng.below(256));
    }
    static const char* kSuffixes[] = {"com", "org", "net", "edu", "co.uk", "com.au"};
    std::string host;
    int labels = rng.range(1, 3);
    for (int i = 0; i < labels; ++i) host += random_label(rng) + '.';
    host += kSuffixes[rng.below(6)];
    return host;
}

// Draws a URL from the grammar url_core accepts: http/https, hostname or
// IPv4 host, optional explicit port, short path, optional query.
inline bitb::Url random_url(Rng& rng) {
    bitb::Url url;
    url.scheme = rng.chance(0.5) ? "https" : "http";
    url.host = random_host(rng);
    url.port = rng.chance(0.5) ? bitb::default_port(url.scheme)
                               : static_cast<int>(1 + rng.below(65535));
    url.path = "/";
    int segments = rng.range(0, 3);
    for (int i = 0; i < segments; ++i) {
        if (i > 0) url.path += '/';
        url.path += random_label(rng);
    }
    if (rng.chance(0.3))
        url.query = random_label(rng) + '=' + random_label(rng);
    return url;
}

}  // namespace bitb::testing
