#include "bitb/qr.hpp"

#include <gtest/gtest.h>

#include <map>
#include <string>
#include <vector>

#include "bitb/errors.hpp"
#include "support/generators.hpp"

namespace bitb {
namespace {

DeviceProfile test_device() {
    return DeviceProfile{"Android", "Chrome", "10.0.0.7", "Geelong"};
}

TEST(Crc32, KnownVector) {
    // Standard check value for CRC-32/ISO-HDLC.
    EXPECT_EQ(crc32("123456789"), 0xCBF43926u);
    EXPECT_EQ(crc32(""), 0x00000000u);
}

TEST(Base36, Counter) {
    EXPECT_EQ(to_base36(0), "0");
    EXPECT_EQ(to_base36(9), "9");
    EXPECT_EQ(to_base36(10), "a");
    EXPECT_EQ(to_base36(35), "z");
    EXPECT_EQ(to_base36(36), "10");
    EXPECT_EQ(to_base36(1295), "zz");
    EXPECT_EQ(to_base36(1296), "100");
}

TEST(QrEnvelope, EncodeClaimNowUrl) {
    const std::string payload = "http://192.168.1.1:3000/claim-now";
    const QrEnvelope env = encode_envelope(payload);
    EXPECT_EQ(env.version, 1);
    EXPECT_EQ(env.payload, payload);

    std::vector<std::uint8_t> covered;
    covered.push_back(1);
    covered.insert(covered.end(), payload.begin(), payload.end());
    EXPECT_EQ(env.checksum, crc32(covered));
    EXPECT_EQ(decode_envelope(env), payload);
}

TEST(QrEnvelope, EmptyPayload) {
    const QrEnvelope env = encode_envelope("");
    EXPECT_TRUE(env.payload.empty());
    const std::vector<std::uint8_t> version_only{1};
    EXPECT_EQ(env.checksum, crc32(version_only));
    EXPECT_EQ(env.to_bytes().size(), 9u);
    EXPECT_EQ(decode_envelope(QrEnvelope::from_bytes(env.to_bytes())), "");
}

TEST(QrEnvelope, ByteLayout) {
    const QrEnvelope env = encode_envelope("qr://0");
    const auto bytes = env.to_bytes();
    ASSERT_EQ(bytes.size(), 9u + 6u);
    EXPECT_EQ(bytes[0], 1);
    // Payload length, little endian.
    EXPECT_EQ(bytes[1], 6);
    EXPECT_EQ(bytes[2], 0);
    EXPECT_EQ(bytes[3], 0);
    EXPECT_EQ(bytes[4], 0);
    EXPECT_EQ(std::string(bytes.begin() + 5, bytes.begin() + 11), "qr://0");
    const std::uint32_t trailer = static_cast<std::uint32_t>(bytes[11]) |
                                  static_cast<std::uint32_t>(bytes[12]) << 8 |
                                  static_cast<std::uint32_t>(bytes[13]) << 16 |
                                  static_cast<std::uint32_t>(bytes[14]) << 24;
    EXPECT_EQ(trailer, env.checksum);
}

TEST(QrEnvelope, EncodingIsDeterministic) {
    const std::string payload = "https://accounts.example.com/signin?next=/";
    EXPECT_EQ(encode_envelope(payload).to_bytes(), encode_envelope(payload).to_bytes());
}

TEST(QrEnvelope, CapacityBoundary) {
    EXPECT_NO_THROW(encode_envelope(std::string(2953, 'a')));
    EXPECT_THROW(encode_envelope(std::string(2954, 'a')), PayloadTooLarge);
    EXPECT_THROW(encode_envelope(std::string(3000, 'a')), PayloadTooLarge);

    const QrEnvelope max = encode_envelope(std::string(2953, 'a'));
    EXPECT_EQ(decode_envelope(QrEnvelope::from_bytes(max.to_bytes())),
              std::string(2953, 'a'));
}

TEST(QrEnvelope, RandomUrlRoundTrip) {
    testing::Rng rng(0x9d2c5680);
    for (int i = 0; i < 1000; ++i) {
        const std::string payload = testing::random_url(rng).display();
        const QrEnvelope env = encode_envelope(payload);
        const QrEnvelope back = QrEnvelope::from_bytes(env.to_bytes());
        EXPECT_EQ(back.version, env.version);
        EXPECT_EQ(back.checksum, env.checksum);
        EXPECT_EQ(decode_envelope(back), payload) << "payload: " << payload;
    }
}

TEST(QrEnvelope, TruncationRejected) {
    auto bytes = encode_envelope("qr://0").to_bytes();
    bytes.pop_back();
    EXPECT_THROW(QrEnvelope::from_bytes(bytes), MalformedEnvelope);

    const std::vector<std::uint8_t> tiny{1, 0, 0};
    EXPECT_THROW(QrEnvelope::from_bytes(tiny), MalformedEnvelope);
}

TEST(QrEnvelope, LengthFieldMismatchRejected) {
    auto bytes = encode_envelope("qr://0").to_bytes();
    bytes[1] += 1;
    EXPECT_THROW(QrEnvelope::from_bytes(bytes), MalformedEnvelope);
}

TEST(QrEnvelope, EveryCoveredBitFlipCaught) {
    // Flip every bit of the version byte, the payload, and the stored CRC;
    // each one must surface as ChecksumMismatch. The length field (bytes
    // 1..4) is framing, not envelope content, and gets its own test below.
    const std::string payload = "http://192.168.1.1:3000/claim-now";
    const auto pristine = encode_envelope(payload).to_bytes();
    for (std::size_t byte = 0; byte < pristine.size(); ++byte) {
        if (byte >= 1 && byte <= 4) continue;
        for (int bit = 0; bit < 8; ++bit) {
            auto bytes = pristine;
            bytes[byte] ^= static_cast<std::uint8_t>(1u << bit);
            EXPECT_THROW(decode_envelope(QrEnvelope::from_bytes(bytes)), ChecksumMismatch)
                << "byte " << byte << " bit " << bit;
        }
    }
}

TEST(QrEnvelope, ChecksumBitFlipCaught) {
    auto bytes = encode_envelope("qr://0").to_bytes();
    bytes[bytes.size() - 2] ^= 0x10;
    EXPECT_THROW(decode_envelope(QrEnvelope::from_bytes(bytes)), ChecksumMismatch);
}

TEST(QrEnvelope, UnknownVersionRejected) {
    // A well-formed envelope from some future version: checksum valid for
    // its own bytes, version gate still refuses it. A version byte that
    // disagrees with the checksum is corruption instead.
    QrEnvelope env = encode_envelope("qr://0");
    env.version = 2;
    env.checksum = crc32(std::string(1, '\x02') + "qr://0");
    EXPECT_THROW(decode_envelope(env), UnknownVersion);

    QrEnvelope flipped = encode_envelope("qr://0");
    flipped.version ^= 0x02;
    EXPECT_THROW(decode_envelope(flipped), ChecksumMismatch);
}

TEST(ShortUri, Shape) {
    EXPECT_EQ(short_uri("0"), "qr://0");
    EXPECT_EQ(parse_short_uri("qr://0"), "0");
    EXPECT_EQ(parse_short_uri("qr://1z"), "1z");
    EXPECT_EQ(parse_short_uri("https://www.youtube.com/premium"), std::nullopt);
    EXPECT_EQ(parse_short_uri("qr://"), std::nullopt);
    EXPECT_EQ(parse_short_uri(""), std::nullopt);
}

TEST(QrRegistry, CreateAssignsSequentialIds) {
    QrRegistry reg;
    const Url premium = parse_url("https://www.youtube.com/premium");
    const auto& first = reg.create_dynamic(premium, 0);
    EXPECT_EQ(first.short_id, "0");
    EXPECT_EQ(first.current_target.display(), "https://www.youtube.com/premium");
    EXPECT_EQ(first.created_at, 0u);
    EXPECT_TRUE(first.edits.empty());

    const auto& second = reg.create_dynamic(parse_url("https://example.com/a"), 2);
    EXPECT_EQ(second.short_id, "1");
    EXPECT_EQ(reg.record_count(), 2u);
    EXPECT_TRUE(reg.has("0"));
    EXPECT_FALSE(reg.has("2"));
}

TEST(QrRegistry, IdsRollIntoBase36) {
    QrRegistry reg;
    const Url target = parse_url("https://example.com/");
    std::vector<std::string> ids;
    for (int i = 0; i < 40; ++i) ids.push_back(reg.create_dynamic(target, 0).short_id);
    EXPECT_EQ(ids[35], "z");
    EXPECT_EQ(ids[36], "10");
    EXPECT_EQ(ids[39], "13");
}

TEST(QrRegistry, RetargetSwapsTargetAndLogsEdit) {
    QrRegistry reg;
    reg.create_dynamic(parse_url("https://www.youtube.com/premium"), 0);
    const auto& rec = reg.retarget("0", parse_url("http://192.168.1.1:3000/claim-now"), 5);
    EXPECT_EQ(rec.current_target.display(), "http://192.168.1.1:3000/claim-now");
    ASSERT_EQ(rec.edits.size(), 1u);
    EXPECT_EQ(rec.edits[0].tick, 5u);
    EXPECT_EQ(rec.edits[0].previous_target.display(), "https://www.youtube.com/premium");

    const auto& scan = reg.resolve_scan("0", test_device(), 6);
    EXPECT_EQ(scan.resolved_target.display(), "http://192.168.1.1:3000/claim-now");
}

TEST(QrRegistry, EnvelopeBytesSurviveRetarget) {
    QrRegistry reg;
    const auto& rec = reg.create_dynamic(parse_url("https://www.youtube.com/premium"), 0);
    const auto before = encode_envelope(short_uri(rec.short_id)).to_bytes();
    reg.retarget("0", parse_url("http://192.168.1.1:3000/claim-now"), 1);
    const auto after = encode_envelope(short_uri(reg.record("0").short_id)).to_bytes();
    EXPECT_EQ(before, after);
}

TEST(QrRegistry, RetargetToIdenticalUrlStillAppends) {
    QrRegistry reg;
    const Url target = parse_url("https://www.youtube.com/premium");
    reg.create_dynamic(target, 0);
    reg.retarget("0", target, 3);
    const auto& rec = reg.record("0");
    EXPECT_EQ(rec.current_target.display(), target.display());
    ASSERT_EQ(rec.edits.size(), 1u);
    EXPECT_EQ(rec.edits[0].previous_target.display(), target.display());
}

TEST(QrRegistry, UnknownShortIdRejected) {
    QrRegistry reg;
    reg.create_dynamic(parse_url("https://example.com/"), 0);
    EXPECT_THROW(reg.retarget("7", parse_url("https://example.org/"), 1), UnknownShortId);
    EXPECT_THROW(reg.resolve_scan("7", test_device(), 1), UnknownShortId);
    EXPECT_THROW(reg.record("7"), UnknownShortId);
}

TEST(QrRegistry, ScanLogsTelemetryWithoutMutatingRecord) {
    QrRegistry reg;
    reg.create_dynamic(parse_url("https://www.youtube.com/premium"), 0);
    const auto& scan = reg.resolve_scan("0", test_device(), 3);
    EXPECT_EQ(scan.short_id, "0");
    EXPECT_EQ(scan.tick, 3u);
    EXPECT_EQ(scan.device.os, "Android");
    EXPECT_EQ(scan.device.browser, "Chrome");
    EXPECT_EQ(scan.device.ip, "10.0.0.7");
    EXPECT_EQ(scan.device.location, "Geelong");
    EXPECT_EQ(scan.resolved_target.display(), "https://www.youtube.com/premium");
    EXPECT_EQ(reg.scan_events().size(), 1u);
    EXPECT_TRUE(reg.record("0").edits.empty());
}

TEST(QrRegistry, ScanEventJsonShape) {
    QrRegistry reg;
    reg.create_dynamic(parse_url("https://www.youtube.com/premium"), 0);
    const auto& scan = reg.resolve_scan("0", test_device(), 3);
    EXPECT_EQ(scan.to_json().dump(),
              R"({"browser":"Chrome","ip":"10.0.0.7","location":"Geelong",)"
              R"("os":"Android","resolved_target":"https://www.youtube.com/premium",)"
              R"("short_id":"0","tick":3})");
    const ScanEvent back = ScanEvent::from_json(scan.to_json());
    EXPECT_EQ(back.to_json(), scan.to_json());
}

TEST(QrRegistry, EmptyDeviceFieldRejected) {
    QrRegistry reg;
    reg.create_dynamic(parse_url("https://example.com/"), 0);
    DeviceProfile device = test_device();
    device.location.clear();
    EXPECT_THROW(reg.resolve_scan("0", device, 1), EmptyField);
    EXPECT_TRUE(reg.scan_events().empty());
}

// Property: every resolve appends exactly one ScanEvent carrying the target
// that was current at that instant, regardless of interleaved retargets.
TEST(QrRegistry, TelemetryIsCompleteUnderInterleaving) {
    testing::Rng rng(0xb5026f5a);
    QrRegistry reg;
    reg.create_dynamic(testing::random_url(rng), 0);
    reg.create_dynamic(testing::random_url(rng), 0);

    std::map<std::string, Url> expected_target = {
        {"0", reg.record("0").current_target},
        {"1", reg.record("1").current_target},
    };
    std::map<std::string, int> resolves;
    Tick tick = 1;
    for (int i = 0; i < 300; ++i, ++tick) {
        const std::string id = rng.chance(0.5) ? "0" : "1";
        if (rng.chance(0.4)) {
            const Url next = testing::random_url(rng);
            reg.retarget(id, next, tick);
            expected_target[id] = normalize(next);
        } else {
            const auto& scan = reg.resolve_scan(id, test_device(), tick);
            ++resolves[id];
            EXPECT_EQ(scan.resolved_target.display(), expected_target[id].display());
        }
    }

    std::map<std::string, int> logged;
    for (const auto& scan : reg.scan_events()) ++logged[scan.short_id];
    EXPECT_EQ(logged, resolves);
}

TEST(QrRegistry, JsonRoundTripPreservesRecordsAndCounter) {
    QrRegistry reg;
    reg.create_dynamic(parse_url("https://www.youtube.com/premium"), 0);
    reg.create_dynamic(parse_url("https://example.com/x"), 1);
    reg.retarget("0", parse_url("http://192.168.1.1:3000/claim-now"), 4);

    const nlohmann::json snapshot = reg.to_json();
    QrRegistry restored = QrRegistry::from_json(snapshot);
    EXPECT_EQ(restored.to_json().dump(), snapshot.dump());
    EXPECT_EQ(restored.record("0").current_target.display(),
              "http://192.168.1.1:3000/claim-now");
    ASSERT_EQ(restored.record("0").edits.size(), 1u);

    // The id counter continues past restored records.
    EXPECT_EQ(restored.create_dynamic(parse_url("https://example.org/"), 9).short_id, "2");
}

}  // namespace
}  // namespace bitb
