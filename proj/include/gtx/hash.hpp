#pragma once

#include <string>
#include <string_view>

namespace gtx {

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view bytes);

}  // namespace gtx
