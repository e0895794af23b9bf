#include "bitb/qr.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "bitb/errors.hpp"

namespace bitb {
namespace {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) {
            c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        }
        table[i] = c;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

std::uint32_t get_u32le(std::span<const std::uint8_t> bytes, std::size_t at) {
    return static_cast<std::uint32_t>(bytes[at]) |
           static_cast<std::uint32_t>(bytes[at + 1]) << 8 |
           static_cast<std::uint32_t>(bytes[at + 2]) << 16 |
           static_cast<std::uint32_t>(bytes[at + 3]) << 24;
}

// Checksum covers the version byte followed by the payload bytes.
std::uint32_t envelope_checksum(std::uint8_t version, std::string_view payload) {
    std::uint32_t crc = 0xFFFFFFFFu;
    auto feed = [&crc](std::uint8_t b) { crc = kCrcTable[(crc ^ b) & 0xFF] ^ (crc >> 8); };
    feed(version);
    for (char ch : payload) feed(static_cast<std::uint8_t>(ch));
    return crc ^ 0xFFFFFFFFu;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::uint8_t b : data) crc = kCrcTable[(crc ^ b) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

std::uint32_t crc32(std::string_view data) {
    return crc32(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string to_base36(std::uint64_t value) {
    static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    if (value == 0) return "0";
    std::string out;
    while (value > 0) {
        out.push_back(kDigits[value % 36]);
        value /= 36;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::uint8_t> QrEnvelope::to_bytes() const {
    std::vector<std::uint8_t> out;
    out.reserve(9 + payload.size());
    out.push_back(version);
    put_u32le(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    put_u32le(out, checksum);
    return out;
}

QrEnvelope QrEnvelope::from_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 9) throw MalformedEnvelope("envelope shorter than fixed fields");
    QrEnvelope env;
    env.version = bytes[0];
    const std::uint32_t len = get_u32le(bytes, 1);
    if (bytes.size() != std::size_t{9} + len) {
        throw MalformedEnvelope("payload length field disagrees with byte count");
    }
    env.payload.assign(bytes.begin() + 5, bytes.begin() + 5 + len);
    env.checksum = get_u32le(bytes, 5 + len);
    return env;
}

QrEnvelope encode_envelope(std::string_view payload) {
    if (payload.size() > kQrPayloadCapacity) {
        throw PayloadTooLarge("payload is " + std::to_string(payload.size()) +
                              " bytes, capacity is " + std::to_string(kQrPayloadCapacity));
    }
    QrEnvelope env;
    env.version = kEnvelopeVersion;
    env.payload = std::string(payload);
    env.checksum = envelope_checksum(env.version, payload);
    return env;
}

std::string decode_envelope(const QrEnvelope& envelope) {
    // Checksum gates everything else: a corrupted version byte is corruption,
    // not a format negotiation.
    if (envelope_checksum(envelope.version, envelope.payload) != envelope.checksum) {
        throw ChecksumMismatch("envelope checksum does not match payload");
    }
    if (envelope.version != kEnvelopeVersion) {
        throw UnknownVersion("envelope version " + std::to_string(envelope.version));
    }
    return envelope.payload;
}

std::string short_uri(std::string_view short_id) {
    return "qr://" + std::string(short_id);
}

std::optional<std::string> parse_short_uri(std::string_view payload) {
    constexpr std::string_view kPrefix = "qr://";
    if (payload.size() <= kPrefix.size() || payload.substr(0, kPrefix.size()) != kPrefix) {
        return std::nullopt;
    }
    return std::string(payload.substr(kPrefix.size()));
}

nlohmann::json DeviceProfile::to_json() const {
    return {{"os", os}, {"browser", browser}, {"ip", ip}, {"location", location}};
}

DeviceProfile DeviceProfile::from_json(const nlohmann::json& j) {
    DeviceProfile d;
    d.os = j.at("os").get<std::string>();
    d.browser = j.at("browser").get<std::string>();
    d.ip = j.at("ip").get<std::string>();
    d.location = j.at("location").get<std::string>();
    return d;
}

nlohmann::json ScanEvent::to_json() const {
    return {
        {"short_id", short_id},
        {"tick", tick},
        {"os", device.os},
        {"browser", device.browser},
        {"ip", device.ip},
        {"location", device.location},
        {"resolved_target", resolved_target.display()},
    };
}

ScanEvent ScanEvent::from_json(const nlohmann::json& j) {
    ScanEvent ev;
    ev.short_id = j.at("short_id").get<std::string>();
    ev.tick = j.at("tick").get<Tick>();
    ev.device.os = j.at("os").get<std::string>();
    ev.device.browser = j.at("browser").get<std::string>();
    ev.device.ip = j.at("ip").get<std::string>();
    ev.device.location = j.at("location").get<std::string>();
    ev.resolved_target = parse_url(j.at("resolved_target").get<std::string>());
    return ev;
}

nlohmann::json DynamicQrRecord::to_json() const {
    nlohmann::json edit_list = nlohmann::json::array();
    for (const auto& edit : edits) {
        edit_list.push_back(
            {{"tick", edit.tick}, {"previous_target", edit.previous_target.display()}});
    }
    return {
        {"short_id", short_id},
        {"current_target", current_target.display()},
        {"created_at", created_at},
        {"edits", edit_list},
    };
}

DynamicQrRecord DynamicQrRecord::from_json(const nlohmann::json& j) {
    DynamicQrRecord rec;
    rec.short_id = j.at("short_id").get<std::string>();
    rec.current_target = parse_url(j.at("current_target").get<std::string>());
    rec.created_at = j.at("created_at").get<Tick>();
    for (const auto& e : j.at("edits")) {
        QrEdit edit;
        edit.tick = e.at("tick").get<Tick>();
        edit.previous_target = parse_url(e.at("previous_target").get<std::string>());
        rec.edits.push_back(std::move(edit));
    }
    return rec;
}

const DynamicQrRecord& QrRegistry::create_dynamic(const Url& target, Tick now) {
    DynamicQrRecord rec;
    rec.short_id = to_base36(next_id_++);
    rec.current_target = normalize(target);
    rec.created_at = now;
    creation_order_.push_back(rec.short_id);
    auto [it, inserted] = records_.emplace(rec.short_id, std::move(rec));
    if (!inserted) throw Error("short id collision for '" + it->first + "'");
    return it->second;
}

const DynamicQrRecord& QrRegistry::retarget(const std::string& short_id,
                                            const Url& new_target, Tick now) {
    DynamicQrRecord& rec = mutable_record(short_id);
    rec.edits.push_back(QrEdit{now, rec.current_target});
    rec.current_target = normalize(new_target);
    return rec;
}

const ScanEvent& QrRegistry::resolve_scan(const std::string& short_id,
                                          const DeviceProfile& device, Tick now) {
    const DynamicQrRecord& rec = record(short_id);
    if (device.os.empty() || device.browser.empty() || device.ip.empty() ||
        device.location.empty()) {
        throw EmptyField("device profile fields must all be non-empty");
    }
    ScanEvent ev;
    ev.short_id = short_id;
    ev.tick = now;
    ev.device = device;
    ev.resolved_target = rec.current_target;
    scans_.push_back(std::move(ev));
    return scans_.back();
}

bool QrRegistry::has(const std::string& short_id) const {
    return records_.count(short_id) != 0;
}

const DynamicQrRecord& QrRegistry::record(const std::string& short_id) const {
    auto it = records_.find(short_id);
    if (it == records_.end()) throw UnknownShortId("no record for '" + short_id + "'");
    return it->second;
}

DynamicQrRecord& QrRegistry::mutable_record(const std::string& short_id) {
    auto it = records_.find(short_id);
    if (it == records_.end()) throw UnknownShortId("no record for '" + short_id + "'");
    return it->second;
}

nlohmann::json QrRegistry::to_json() const {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& id : creation_order_) recs.push_back(record(id).to_json());
    return {{"next_id", next_id_}, {"records", recs}};
}

QrRegistry QrRegistry::from_json(const nlohmann::json& j) {
    QrRegistry reg;
    reg.next_id_ = j.at("next_id").get<std::uint64_t>();
    for (const auto& r : j.at("records")) {
        DynamicQrRecord rec = DynamicQrRecord::from_json(r);
        reg.creation_order_.push_back(rec.short_id);
        reg.records_.emplace(rec.short_id, std::move(rec));
    }
    return reg;
}

}  // namespace bitb
