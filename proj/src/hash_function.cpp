#include "hashlab/hash_function.hpp"

#include "hashlab/errors.hpp"

#include <algorithm>
#include <type_traits>

namespace hashlab {

HashFunction::HashFunction(SchemeDescriptor descriptor, HashVariant impl)
    : desc_(descriptor.normalized()),
      digest_(desc_.digest()),
      impl_(std::make_shared<const HashVariant>(std::move(impl))) {}

void HashFunction::hash_all(std::span<const std::uint64_t> keys, std::span<std::uint64_t> out) const {
    if (out.size() < keys.size()) throw InvalidParams("output span too small");
    visit([&](const auto& h) {
        for (std::size_t i = 0; i < keys.size(); ++i) out[i] = h(keys[i]);
    });
}

std::size_t HashFunction::count_lookups(std::uint64_t x) const {
    LookupCounter counter;
    visit([&](const auto& h) { h.eval(x, counter); });
    return counter.reads;
}

std::size_t HashFunction::table_count() const noexcept {
    const unsigned c = desc_.c();
    const unsigned d = desc_.d;
    switch (desc_.scheme) {
        case Scheme::SimpleTab: return c;
        case Scheme::TabPerm: return c + d;
        case Scheme::Tab1Perm: return c + 1;
        case Scheme::TwistedTab: return c;
        case Scheme::MixedTab: return 2 * c;
        case Scheme::DoubleTab: return c + d;
        default: return 0;
    }
}

HashFunction build(const SchemeDescriptor& descriptor) {
    const SchemeDescriptor desc = descriptor.normalized();
    const TabGeometry geometry{desc.char_bits, desc.c(), desc.d};
    const MasterSeed& seed = desc.seed;

    auto tables = [&] { return make_generator(seed, "tab.char"); };
    auto perms = [&] { return make_generator(seed, "tab.perm"); };

    switch (desc.scheme) {
        case Scheme::SimpleTab: {
            auto gen = tables();
            return {desc, SimpleTabulation::random(geometry, gen)};
        }
        case Scheme::TabPerm: {
            auto tg = tables();
            auto pg = perms();
            return {desc, TabulationPermutation::random(geometry, tg, pg)};
        }
        case Scheme::Tab1Perm: {
            auto tg = tables();
            auto pg = perms();
            return {desc, Tabulation1Permutation::random(geometry, tg, pg)};
        }
        case Scheme::TwistedTab: {
            auto gen = make_generator(seed, "tab.twisted");
            return {desc, TwistedTabulation::random(geometry, gen)};
        }
        case Scheme::MixedTab: {
            auto gen = make_generator(seed, "tab.mixed");
            return {desc, MixedTabulation::random(geometry, gen)};
        }
        case Scheme::DoubleTab: {
            auto first = make_generator(seed, "tab.double.1");
            auto second = make_generator(seed, "tab.double.2");
            return {desc, DoubleTabulation::random(geometry, first, second)};
        }
        case Scheme::MultiplyShift: {
            auto gen = make_generator(seed, "multishift");
            if (desc.key_bits == 32) return {desc, MultiplyShift32::random(gen)};
            return {desc, MultiplyShift64::random(gen)};
        }
        case Scheme::PolyHash: {
            auto gen = make_generator(seed, "polyhash");
            if (desc.key_bits == 32) return {desc, PolyHash61::random(desc.poly_k, 32, gen)};
            return {desc, PolyHash89::random(desc.poly_k, 64, gen)};
        }
    }
    throw InvalidDescriptor("unknown scheme");
}

// ---------------------------------------------------------------- dump

namespace {

class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void put(std::uint64_t value, unsigned bytes) {
        for (unsigned i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }

    void put128(uint128 value) {
        put(static_cast<std::uint64_t>(value), 8);
        put(static_cast<std::uint64_t>(value >> 64), 8);
    }

    void values(std::span<const std::uint64_t> values, unsigned bits) {
        const unsigned bytes = (bits + 7) / 8;
        for (const std::uint64_t v : values) put(v, bytes);
    }

private:
    std::vector<std::uint8_t>& out_;
};

}  // namespace

std::vector<std::uint8_t> dump_tables(const HashFunction& hf) {
    const SchemeDescriptor& desc = hf.descriptor();
    std::vector<std::uint8_t> out = {'H', 'L', 'A', 'B', '1'};
    out.push_back(static_cast<std::uint8_t>(desc.scheme));
    out.push_back(static_cast<std::uint8_t>(desc.c()));
    out.push_back(static_cast<std::uint8_t>(desc.d));
    out.push_back(static_cast<std::uint8_t>(desc.char_bits));
    ByteWriter w(out);

    hf.visit([&](const auto& h) {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, SimpleTabulation>) {
            for (unsigned i = 0; i < h.geometry().c; ++i) w.values(h.table(i), h.geometry().out_bits());
        } else if constexpr (std::is_same_v<T, TabulationPermutation>) {
            const TabGeometry& g = h.simple().geometry();
            for (unsigned i = 0; i < g.c; ++i) w.values(h.simple().table(i), g.out_bits());
            for (unsigned i = 1; i <= g.d; ++i) w.values(h.folded_table(i), g.out_bits());
        } else if constexpr (std::is_same_v<T, Tabulation1Permutation>) {
            const TabGeometry& g = h.simple().geometry();
            for (unsigned i = 0; i < g.c; ++i) w.values(h.simple().table(i), g.out_bits());
            w.values(h.folded_table(), g.out_bits());
        } else if constexpr (std::is_same_v<T, TwistedTabulation>) {
            const TabGeometry& g = h.geometry();
            const unsigned out_bytes = (g.out_bits() + 7) / 8;
            const unsigned char_bytes = (g.char_bits + 7) / 8;
            for (const auto& e : h.twisted_entries()) {
                w.put(e.value, out_bytes);
                w.put(e.twist, char_bytes);
            }
            w.values(h.last_table(), g.out_bits());
        } else if constexpr (std::is_same_v<T, MixedTabulation>) {
            const TabGeometry& g = h.geometry();
            const unsigned out_bytes = (g.out_bits() + 7) / 8;
            const unsigned key_bytes = (g.key_bits() + 7) / 8;
            for (const auto& e : h.primary_entries()) {
                w.put(e.value, out_bytes);
                w.put(e.derived, key_bytes);
            }
            w.values(h.derived_tables(), g.out_bits());
        } else if constexpr (std::is_same_v<T, DoubleTabulation>) {
            const TabGeometry& g = h.geometry();
            const unsigned char_bytes = (g.char_bits + 7) / 8;
            for (const std::uint16_t ch : h.first_tables()) w.put(ch, char_bytes);
            w.values(h.second_tables(), g.key_bits());
        } else if constexpr (std::is_same_v<T, MultiplyShift32>) {
            w.put(h.a(), 8);
            w.put(h.b(), 8);
        } else if constexpr (std::is_same_v<T, MultiplyShift64>) {
            w.put128(h.a());
            w.put128(h.b());
        } else {
            w.put(h.k(), 4);
            for (const auto c : h.coefficients()) w.put128(c);
        }
    });
    return out;
}

}  // namespace hashlab
