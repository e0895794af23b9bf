#include "bitb/url.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "support/generators.hpp"

namespace bitb {
namespace {

TEST(UrlParse, ClaimNowServerLink) {
    Url url = parse_url("http://192.168.1.1:3000/claim-now");
    EXPECT_EQ(url.scheme, "http");
    EXPECT_EQ(url.host, "192.168.1.1");
    EXPECT_EQ(url.port, 3000);
    EXPECT_EQ(url.path, "/claim-now");
    EXPECT_FALSE(url.query.has_value());
    EXPECT_EQ(url.display(), "http://192.168.1.1:3000/claim-now");
}

TEST(UrlParse, PremiumPageUrl) {
    Url url = parse_url("https://www.youtube.com/premium");
    EXPECT_EQ(url.scheme, "https");
    EXPECT_EQ(url.host, "www.youtube.com");
    EXPECT_EQ(url.port, 443);
    EXPECT_EQ(url.path, "/premium");
    // Default port stays internal; display elides it.
    EXPECT_EQ(url.display(), "https://www.youtube.com/premium");
}

TEST(UrlParse, RejectsSchemelessInput) {
    EXPECT_THROW(parse_url("youtube.com"), MalformedUrl);
    EXPECT_THROW(parse_url(""), MalformedUrl);
    EXPECT_THROW(parse_url("ftp://youtube.com/"), MalformedUrl);
}

TEST(UrlParse, DefaultsPortAndPath) {
    Url url = parse_url("https://youtube.com");
    EXPECT_EQ(url.port, 443);
    EXPECT_EQ(url.path, "/");
    EXPECT_EQ(parse_url("http://localhost:3000").path, "/");
    EXPECT_EQ(parse_url("http://example.com").port, 80);
}

TEST(UrlParse, RejectsBadPorts) {
    EXPECT_THROW(parse_url("http://a.com:0/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://a.com:65536/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://a.com:abc/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://a.com:/"), MalformedUrl);
    EXPECT_EQ(parse_url("http://a.com:65535/").port, 65535);
    EXPECT_EQ(parse_url("http://a.com:1/").port, 1);
}

TEST(UrlParse, RejectsEmptyHost) {
    EXPECT_THROW(parse_url("http://"), MalformedUrl);
    EXPECT_THROW(parse_url("http:///path"), MalformedUrl);
    EXPECT_THROW(parse_url("http://:80/x"), MalformedUrl);
}

TEST(UrlParse, RejectsIpv6AndNonAsciiHosts) {
    EXPECT_THROW(parse_url("http://[::1]/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://m\xc3\xbcnchen.com/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://bad_host.com/"), MalformedUrl);
}

TEST(UrlParse, RejectsMalformedIpv4Literals) {
    EXPECT_THROW(parse_url("http://999.1.1.1/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://1.2.3/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://1.2.3.4.5/"), MalformedUrl);
    EXPECT_THROW(parse_url("http://01.2.3.4/"), MalformedUrl);
}

TEST(UrlParse, QueryPassesThrough) {
    Url url = parse_url("http://a.com/p?x=1&y=2");
    ASSERT_TRUE(url.query.has_value());
    EXPECT_EQ(*url.query, "x=1&y=2");
    EXPECT_EQ(url.display(), "http://a.com/p?x=1&y=2");
}

TEST(UrlParse, LowercasesSchemeAndHostOnly) {
    Url url = parse_url("HTTP://WWW.YouTube.COM/Premium");
    EXPECT_EQ(url.scheme, "http");
    EXPECT_EQ(url.host, "www.youtube.com");
    EXPECT_EQ(url.path, "/Premium");
}

TEST(UrlNormalize, Idempotent) {
    testing::Rng rng(101);
    for (int i = 0; i < 500; ++i) {
        Url url = testing::random_url(rng);
        // Denormalize a copy to give normalize() real work.
        Url rough = url;
        if (rng.chance(0.5)) rough.host[0] = static_cast<char>(std::toupper(rough.host[0]));
        if (rng.chance(0.3)) rough.port = 0;
        Url once = normalize(rough);
        EXPECT_EQ(normalize(once), once) << url.display();
    }
}

TEST(UrlDisplay, ParseDisplayParseIsFixedPoint) {
    testing::Rng rng(202);
    for (int i = 0; i < 500; ++i) {
        Url url = testing::random_url(rng);
        std::string shown = url.display();
        Url reparsed = parse_url(shown);
        EXPECT_EQ(reparsed, url) << shown;
        EXPECT_EQ(reparsed.display(), shown);
    }
}

TEST(UrlOrigin, EqualityIsAnEquivalenceRelation) {
    testing::Rng rng(303);
    std::vector<Origin> corpus;
    for (int i = 0; i < 60; ++i) corpus.push_back(testing::random_url(rng).origin());
    // Seed some equal-after-normalization pairs.
    corpus.push_back(Origin{"https", "www.youtube.com", 443});
    corpus.push_back(parse_url("HTTPS://WWW.YOUTUBE.COM:443/x").origin());

    for (const Origin& a : corpus) EXPECT_EQ(a, a);
    for (const Origin& a : corpus) {
        for (const Origin& b : corpus) {
            EXPECT_EQ(a == b, b == a);
            if (a == b) continue;
            for (const Origin& c : corpus) {
                if (b == c) EXPECT_FALSE(a == c);
            }
        }
    }
}

TEST(RegistrableDomain, StripsSubdomains) {
    SuffixList list = SuffixList::builtin();
    EXPECT_EQ(list.registrable_domain("www.youtube.com"), "youtube.com");
    EXPECT_EQ(list.registrable_domain("accounts.example.co.uk"), "example.co.uk");
    EXPECT_EQ(list.registrable_domain("deep.sub.example.com"), "example.com");
    EXPECT_EQ(list.registrable_domain("example.com.au"), "example.com.au");
}

TEST(RegistrableDomain, RejectsIpLiterals) {
    EXPECT_THROW(SuffixList::builtin().registrable_domain("192.168.1.1"), NotAHostname);
}

TEST(RegistrableDomain, EdgeHosts) {
    SuffixList list = SuffixList::builtin();
    EXPECT_EQ(list.registrable_domain("com"), "com");
    EXPECT_EQ(list.registrable_domain("localhost"), "localhost");
    // Unknown registry falls back to the last two labels.
    EXPECT_EQ(list.registrable_domain("a.b.internal"), "b.internal");
    EXPECT_EQ(list.registrable_domain("YouTube.COM"), "youtube.com");
}

TEST(RegistrableDomain, ShippedSuffixFileMatchesBuiltin) {
    SuffixList shipped = SuffixList::load(std::filesystem::path(BITB_DATA_DIR) / "suffixes.txt");
    SuffixList builtin = SuffixList::builtin();
    EXPECT_EQ(shipped.suffixes(), builtin.suffixes());
}

TEST(RegistrableDomain, SuffixFileParsing) {
    std::filesystem::path file =
        std::filesystem::temp_directory_path() / "bitb_suffix_parse_test.txt";
    {
        std::ofstream out(file);
        out << "# comment line\n"
            << "  test  \n"
            << "\n"
            << "foo.bar # trailing comment\n";
    }
    SuffixList list = SuffixList::load(file);
    EXPECT_TRUE(list.contains("test"));
    EXPECT_TRUE(list.contains("foo.bar"));
    EXPECT_EQ(list.suffixes().size(), 2u);
    EXPECT_EQ(list.registrable_domain("x.foo.bar"), "x.foo.bar");
    EXPECT_EQ(list.registrable_domain("y.x.foo.bar"), "x.foo.bar");
    std::filesystem::remove(file);
    EXPECT_THROW(SuffixList::load(file), ConfigError);
}

TEST(PrivateAddress, Rfc1918AndLocalhost) {
    EXPECT_TRUE(is_private_address("192.168.1.1"));
    EXPECT_TRUE(is_private_address("localhost"));
    EXPECT_TRUE(is_private_address("LOCALHOST"));
    EXPECT_TRUE(is_private_address("10.0.0.7"));
    EXPECT_TRUE(is_private_address("172.16.0.1"));
    EXPECT_TRUE(is_private_address("172.31.255.255"));
    EXPECT_FALSE(is_private_address("172.15.0.1"));
    EXPECT_FALSE(is_private_address("172.32.0.1"));
    EXPECT_FALSE(is_private_address("192.169.0.1"));
    EXPECT_FALSE(is_private_address("www.youtube.com"));
    EXPECT_FALSE(is_private_address("8.8.8.8"));
    // Spec pins the set to RFC1918 + "localhost"; loopback IPs are outside it.
    EXPECT_FALSE(is_private_address("127.0.0.1"));
}

}  // namespace
}  // namespace bitb
