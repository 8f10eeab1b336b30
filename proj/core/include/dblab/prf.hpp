#pragma once

#include <cstdint>

#include "dblab/bits.hpp"

namespace dblab {

// Deterministic counter-mode expansion keyed by (key, nonce_p, nonce_v).
// Stands in for the protocol hash/PRF of the slow phase: same inputs always
// give the same stream, distinct nonce pairs give unrelated-looking streams.
// It is a reproducibility tool, not a hardened cryptographic primitive; a
// keyed hash can be swapped in behind the same interface.
struct Prf {
  std::uint64_t key = 0;

  // Expands to exactly out_len bits; bit i of the result is H_{i+1} in the
  // 1-based register notation. Throws LayoutError when out_len == 0.
  BitString expand(std::uint64_t nonce_p, std::uint64_t nonce_v,
                   std::size_t out_len) const;
};

}  // namespace dblab
