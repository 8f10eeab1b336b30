#include "dblab/prf.hpp"

#include "dblab/errors.hpp"
#include "dblab/rng.hpp"

namespace dblab {

BitString Prf::expand(std::uint64_t nonce_p, std::uint64_t nonce_v,
                      std::size_t out_len) const {
  if (out_len == 0)
    throw LayoutError("Prf::expand: output length must be positive");

  // Absorb key and nonces, then squeeze 64 bits per counter block.
  std::uint64_t h = detail::mix64(key ^ 0xA0761D6478BD642FULL);
  h = detail::mix64(h ^ detail::mix64(nonce_p ^ 0xE7037ED1A0B428DBULL));
  h = detail::mix64(h ^ detail::mix64(nonce_v ^ 0x8EBC6AF09C88C6E3ULL));

  BitString out;
  std::uint64_t block = 0;
  std::size_t produced = 0;
  while (produced < out_len) {
    std::uint64_t w = detail::mix64(h + (block + 1) * 0x9E3779B97F4A7C15ULL);
    ++block;
    for (int b = 0; b < 64 && produced < out_len; ++b, ++produced) {
      out.append(static_cast<std::uint8_t>(w & 1u));
      w >>= 1;
    }
  }
  return out;
}

}  // namespace dblab
