#pragma once

// Signature-based analysis of a captured page plus its request trace and,
// when available, the QR resolution chain. Five boolean signatures, each
// with evidence; a weighted sum and a threshold give the verdict. Scores are
// kept as exact integer fractions so tests can demand equality, not
// closeness.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitb/page.hpp"
#include "bitb/qr.hpp"
#include "bitb/sim.hpp"

namespace bitb {

// Geometry constants for the chrome heuristics: the top 5% of the viewport
// is "address bar territory", and a convincing bar spans at least 60% width.
inline constexpr int kTopBandLimit = kViewportSize / 20;
inline constexpr int kMinBarWidth = kViewportSize * 6 / 10;

struct Signature {
    std::string id;  // "S1".."S5"
    bool fired = false;
    bool skipped = false;
    std::vector<std::string> evidence;  // node ids, "trace:i", "edit:i", "scan:i"
    int weight_num = 0;
    int weight_den = 1;

    double weight() const { return static_cast<double>(weight_num) / weight_den; }
    nlohmann::json to_json() const;
};

struct ScanChain {
    DynamicQrRecord record;
    std::vector<ScanEvent> scans;
};

struct DetectionReport {
    std::vector<Signature> signatures;  // S1..S5, in order
    int score_num = 0;
    int score_den = 1;
    std::string verdict;  // "benign" | "suspicious"
    std::string inputs_digest;

    double score() const { return static_cast<double>(score_num) / score_den; }
    nlohmann::json to_json() const;
};

// Individual signatures. These fill id/fired/evidence; analyze assigns the
// weights.
Signature detect_s1_displayed_origin_mismatch(const Document& doc);
Signature detect_s2_chrome_mimicry(const Document& doc);
Signature detect_s3_cross_origin_credential_form(const Document& doc);
Signature detect_s4_mutable_indirection(const ScanChain& chain);  // EmptyChain
Signature detect_s5_post_submit_legit_redirect(const std::vector<TraceEntry>& trace);

// Exact weighted score for a firing pattern: numerator over denominator.
// With the chain absent S4 is skipped and the remaining weights renormalize.
std::pair<int, int> weighted_score(const std::array<bool, 5>& fired, bool s4_present);

DetectionReport analyze(const Document& doc, const std::vector<TraceEntry>& trace,
                        const std::optional<ScanChain>& chain = std::nullopt);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace bitb
