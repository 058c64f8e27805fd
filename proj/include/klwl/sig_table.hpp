#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

namespace klwl {

// Shared dense color-id counter. Ids are assigned in first-seen order and
// never reused within a session.
class ColorIdAllocator {
public:
    int32_t allocate() { return next_++; }
    int32_t allocated() const { return next_; }

private:
    int32_t next_ = 0;
};

// Exact signature interning: equal signatures map to equal dense ids,
// distinct signatures to distinct ids. Open addressing over an arena of
// flattened signature values. clear_payloads() drops stored signatures while
// keeping the id counter monotonic; callers use it between refinement
// iterations, where signature values cannot repeat across iterations because
// each embeds previous-iteration color ids drawn from disjoint ranges.
template <typename T>
class SigTable {
public:
    explicit SigTable(ColorIdAllocator& alloc) : alloc_(&alloc) { reset_slots(1 << 12); }

    int32_t intern(const T* data, size_t len) {
        uint64_t h = hash(data, len);
        size_t i = h & mask_;
        while (true) {
            Slot& s = slots_[i];
            if (s.id < 0) {
                if (count_ + 1 > (mask_ + 1) * 7 / 10) {
                    grow();
                    return intern(data, len);
                }
                s.hash = h;
                s.off = static_cast<uint64_t>(arena_.size());
                s.len = static_cast<uint32_t>(len);
                s.id = alloc_->allocate();
                arena_.insert(arena_.end(), data, data + len);
                ++count_;
                return s.id;
            }
            if (s.hash == h && s.len == len &&
                std::memcmp(arena_.data() + s.off, data, len * sizeof(T)) == 0)
                return s.id;
            i = (i + 1) & mask_;
        }
    }

    size_t distinct() const { return count_; }

    void clear_payloads() {
        arena_.clear();
        reset_slots(1 << 12);
    }

private:
    struct Slot {
        uint64_t hash = 0;
        uint64_t off = 0;
        uint32_t len = 0;
        int32_t id = -1;
    };

    static uint64_t hash(const T* data, size_t len) {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ (len * 0xbf58476d1ce4e5b9ull);
        for (size_t i = 0; i < len; ++i) {
            uint64_t x = static_cast<uint64_t>(data[i]) + h;
            x ^= x >> 30;
            x *= 0xbf58476d1ce4e5b9ull;
            x ^= x >> 27;
            x *= 0x94d049bb133111ebull;
            x ^= x >> 31;
            h = x;
        }
        return h;
    }

    void reset_slots(size_t cap) {
        slots_.assign(cap, Slot{});
        mask_ = cap - 1;
        count_ = 0;
    }

    void grow() {
        std::vector<Slot> old;
        old.swap(slots_);
        slots_.assign((mask_ + 1) * 2, Slot{});
        mask_ = slots_.size() - 1;
        for (const Slot& s : old) {
            if (s.id < 0) continue;
            size_t i = s.hash & mask_;
            while (slots_[i].id >= 0) i = (i + 1) & mask_;
            slots_[i] = s;
        }
    }

    ColorIdAllocator* alloc_;
    std::vector<T> arena_;
    std::vector<Slot> slots_;
    size_t mask_ = 0;
    size_t count_ = 0;
};

}  // namespace klwl
