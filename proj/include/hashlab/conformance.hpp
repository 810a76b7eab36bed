#pragma once

// Known-answer vectors: (descriptor, seed, key, hash) rows that pin the exact
// output of every scheme across builds and machines.

#include "hashlab/seed.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hashlab {

struct VectorRow {
    std::string descriptor;  // SchemeDescriptor::to_string() form
    MasterSeed seed;
    std::uint64_t key = 0;
    std::uint64_t hash = 0;

    friend bool operator==(const VectorRow&, const VectorRow&) = default;
};

// Rows for every scheme and key width the library supports, hashed by this build.
std::vector<VectorRow> generate_vectors();

// Tab-separated, one header line: descriptor, seed, key, hash (hex with 0x).
void write_vectors(std::ostream& out, const std::vector<VectorRow>& rows);
std::vector<VectorRow> read_vectors(std::istream& in);  // throws FormatError

struct ConformanceReport {
    std::size_t rows = 0;
    std::size_t mismatches = 0;
    std::vector<std::string> details;  // first few mismatching rows
};

ConformanceReport verify_vectors(const std::vector<VectorRow>& rows);

}  // namespace hashlab
