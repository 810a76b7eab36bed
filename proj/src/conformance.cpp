#include "hashlab/conformance.hpp"

#include "hashlab/descriptor.hpp"
#include "hashlab/errors.hpp"
#include "hashlab/hash_function.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hashlab {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(std::string_view s) {
    if (s.size() < 3 || s.size() > 18 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) {
        throw FormatError("bad hex value '" + std::string(s) + "'");
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), v, 16);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("bad hex value '" + std::string(s) + "'");
    return v;
}

constexpr const char* kHeader = "descriptor\tseed\tkey\thash";

}  // namespace

std::vector<VectorRow> generate_vectors() {
    const std::vector<std::string> descriptors = {
        "simpletab/32", "simpletab/64", "tabperm/32",  "tabperm/64",    "tab1perm/32",    "tab1perm/64",
        "tab1perm/32/8/8", "twisted/32", "twisted/64", "mixed/32",      "mixed/64",       "doubletab/32",
        "multishift/32", "multishift/64", "poly2/32",  "poly2/64",      "poly100/32",     "poly100/64",
    };
    const std::vector<MasterSeed> seeds = {MasterSeed(0x1), MasterSeed::from_hex("0x9e3779b97f4a7c15f39cc0605cedc834")};
    std::vector<VectorRow> rows;
    for (const auto& text : descriptors) {
        for (const auto& seed : seeds) {
            const HashFunction hf = build(parse_descriptor(text, seed));
            const unsigned bits = hf.descriptor().key_bits;
            const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
            std::vector<std::uint64_t> keys = {0, 1, 0xdeadbeef & mask, mask};
            for (std::uint64_t i = 0; i < 3; ++i) keys.push_back(detail::expand(seed, detail::fnv1a(text), i) & mask);
            for (const std::uint64_t key : keys) rows.push_back({hf.descriptor().to_string(), seed, key, hf(key)});
        }
    }
    return rows;
}

void write_vectors(std::ostream& out, const std::vector<VectorRow>& rows) {
    out << kHeader << '\n';
    for (const auto& r : rows) {
        out << r.descriptor << '\t' << r.seed.to_short_hex() << '\t' << hex64(r.key) << '\t' << hex64(r.hash) << '\n';
    }
}

std::vector<VectorRow> read_vectors(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kHeader) throw FormatError("vector file must start with the header line");
    std::vector<VectorRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
        if (fields.size() != 4) throw FormatError("line " + std::to_string(line_no) + ": expected 4 fields");
        VectorRow r;
        r.descriptor = fields[0];
        try {
            r.seed = MasterSeed::from_hex(fields[1]);
        } catch (const InvalidParams& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.key = parse_hex64(fields[2]);
        r.hash = parse_hex64(fields[3]);
        rows.push_back(std::move(r));
    }
    return rows;
}

ConformanceReport verify_vectors(const std::vector<VectorRow>& rows) {
    ConformanceReport report;
    // Building DoubleTab is the expensive part; reuse functions across rows.
    std::map<std::pair<std::string, std::string>, HashFunction> cache;
    for (const auto& r : rows) {
        ++report.rows;
        const auto cache_key = std::make_pair(r.descriptor, r.seed.to_hex());
        auto it = cache.find(cache_key);
        if (it == cache.end()) it = cache.emplace(cache_key, build(parse_descriptor(r.descriptor, r.seed))).first;
        const std::uint64_t got = it->second(r.key);
        if (got != r.hash) {
            ++report.mismatches;
            if (report.details.size() < 10) {
                report.details.push_back(r.descriptor + " seed " + r.seed.to_short_hex() + " key " + hex64(r.key) +
                                         ": expected " + hex64(r.hash) + ", got " + hex64(got));
            }
        }
    }
    return report;
}

}  // namespace hashlab
