#pragma once

// Dynamic QR indirection: a byte-level envelope codec for the printed code
// and an in-process stand-in for the shortener service. The envelope (and
// therefore the physical code) wraps a stable short URI; where that URI
// points is a server-side row the owner can edit after the fact. Scans are
// logged as telemetry.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitb/sim.hpp"
#include "bitb/url.hpp"

namespace bitb {

// Version 40, binary mode, error correction L.
inline constexpr std::size_t kQrPayloadCapacity = 2953;
inline constexpr std::uint8_t kEnvelopeVersion = 1;

std::uint32_t crc32(std::span<const std::uint8_t> data);
std::uint32_t crc32(std::string_view data);

std::string to_base36(std::uint64_t value);

struct QrEnvelope {
    std::uint8_t version = kEnvelopeVersion;
    std::string payload;
    std::uint32_t checksum = 0;

    std::vector<std::uint8_t> to_bytes() const;
    static QrEnvelope from_bytes(std::span<const std::uint8_t> bytes);
};

QrEnvelope encode_envelope(std::string_view payload);
std::string decode_envelope(const QrEnvelope& envelope);

std::string short_uri(std::string_view short_id);
// Returns the short id if payload has the "qr://<id>" shape.
std::optional<std::string> parse_short_uri(std::string_view payload);

struct DeviceProfile {
    std::string os;
    std::string browser;
    std::string ip;
    std::string location;

    nlohmann::json to_json() const;
    static DeviceProfile from_json(const nlohmann::json& j);
};

struct ScanEvent {
    std::string short_id;
    Tick tick = 0;
    DeviceProfile device;
    Url resolved_target;

    nlohmann::json to_json() const;
    static ScanEvent from_json(const nlohmann::json& j);
};

struct QrEdit {
    Tick tick = 0;
    Url previous_target;
};

struct DynamicQrRecord {
    std::string short_id;
    Url current_target;
    Tick created_at = 0;
    std::vector<QrEdit> edits;  // append-only history, oldest first

    nlohmann::json to_json() const;
    static DynamicQrRecord from_json(const nlohmann::json& j);
};

class QrRegistry {
  public:
    const DynamicQrRecord& create_dynamic(const Url& target, Tick now);
    const DynamicQrRecord& retarget(const std::string& short_id, const Url& new_target,
                                    Tick now);
    // Logs a ScanEvent and returns it; the caller follows resolved_target.
    const ScanEvent& resolve_scan(const std::string& short_id, const DeviceProfile& device,
                                  Tick now);

    bool has(const std::string& short_id) const;
    const DynamicQrRecord& record(const std::string& short_id) const;
    std::size_t record_count() const { return records_.size(); }
    const std::vector<ScanEvent>& scan_events() const { return scans_; }

    nlohmann::json to_json() const;
    static QrRegistry from_json(const nlohmann::json& j);

  private:
    DynamicQrRecord& mutable_record(const std::string& short_id);

    std::map<std::string, DynamicQrRecord> records_;
    std::vector<std::string> creation_order_;
    std::vector<ScanEvent> scans_;
    std::uint64_t next_id_ = 0;
};

}  // namespace bitb
