#ifndef SENTINEL_BASE64_HPP
#define SENTINEL_BASE64_HPP

#include "sentinel/common.hpp"

namespace sentinel::adv {

// RFC 4648 standard alphabet with '=' padding; output length is 4*ceil(n/3).
Bytes base64_encode(const Bytes& input);

// Strict decoder (rejects characters outside the alphabet / bad padding).
Bytes base64_decode(const Bytes& input);

} // namespace sentinel::adv

#endif
