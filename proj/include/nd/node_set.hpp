#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace nd {

// Finite set of node identities, stored as a bitmask over ids 0..31.
// Equality is set equality; members() always reports ids in ascending order.
class NodeSet {
  public:
    static constexpr int kMaxId = 31;

    NodeSet() = default;
    NodeSet(std::initializer_list<int> ids) {
        for (int id : ids) insert(id);
    }
    static NodeSet from_mask(std::uint32_t mask) {
        NodeSet s;
        s.bits_ = mask;
        return s;
    }

    void insert(int id) {
        check(id);
        bits_ |= (1u << id);
    }
    void erase(int id) {
        check(id);
        bits_ &= ~(1u << id);
    }
    bool contains(int id) const { return id >= 0 && id <= kMaxId && (bits_ >> id) & 1u; }

    int size() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }
    std::uint32_t mask() const { return bits_; }

    bool is_subset_of(NodeSet other) const { return (bits_ & ~other.bits_) == 0; }

    NodeSet intersect(NodeSet other) const { return from_mask(bits_ & other.bits_); }
    NodeSet unite(NodeSet other) const { return from_mask(bits_ | other.bits_); }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(size());
        for (std::uint32_t m = bits_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
        return out;
    }

    friend bool operator==(NodeSet a, NodeSet b) { return a.bits_ == b.bits_; }
    friend bool operator!=(NodeSet a, NodeSet b) { return a.bits_ != b.bits_; }

  private:
    static void check(int id) {
        if (id < 0 || id > kMaxId) throw std::out_of_range("NodeSet: id out of range");
    }
    std::uint32_t bits_ = 0;
};

}  // namespace nd
