// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace rpclure {

/// Disjoint sets over 0..size-1 with path compression and union by rank.
class UnionFind {
  public:
    explicit UnionFind(size_t size) : parent_(size), rank_(size, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    size_t find(size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void merge(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

    bool same(size_t a, size_t b) { return find(a) == find(b); }

  private:
    std::vector<size_t> parent_;
    std::vector<size_t> rank_;
};

}  // namespace rpclure
