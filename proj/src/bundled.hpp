#pragma once

#include <span>
#include <string_view>

namespace epiq::detail {

struct BundledModel {
  std::string_view name;
  std::string_view text;
};

/// Model files compiled into the library, sorted by name.
std::span<const BundledModel> bundled_models();

} // namespace epiq::detail
