#pragma once

#include <string>
#include <string_view>

namespace rdt {

// Lower-case hex SHA-1 digest.
std::string sha1_hex(std::string_view data);

}  // namespace rdt
