#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mmvrp {

struct EncodedImage {
  std::string media_type = "image/png";
  std::vector<std::uint8_t> bytes;

  friend bool operator==(const EncodedImage&, const EncodedImage&) = default;
};

}  // namespace mmvrp
