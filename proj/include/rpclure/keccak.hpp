// Copyright 2026 The rpclure Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <string_view>

#include "rpclure/bytes.hpp"

namespace rpclure {

/// Keccak-256 with the original multi-rate padding (0x01), as used by
/// Ethereum for transaction hashes, addresses and function selectors.
/// This is not NIST SHA3-256, which pads with 0x06.
Hash32 keccak256(BytesView input);
Hash32 keccak256(std::string_view input);

/// Deterministic byte stream derived from a seed by hashing a counter.
/// Used where reproducibility matters (scenario replay, test generators);
/// not a substitute for the process CSPRNG.
class KeccakRng {
  public:
    explicit KeccakRng(uint64_t seed);
    explicit KeccakRng(const Hash32& seed);

    void fill(uint8_t* out, size_t len);
    Bytes bytes(size_t len);
    uint64_t next_u64();
    /// Uniform in [0, bound) via rejection (bound > 0).
    uint64_t next_below(uint64_t bound);

  private:
    void refill();

    Hash32 seed_;
    uint64_t counter_ = 0;
    Hash32 block_{};
    size_t avail_ = 0;
};

}  // namespace rpclure
