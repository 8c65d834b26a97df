#pragma once

#include <string_view>

#ifndef TTG_VERSION
#define TTG_VERSION "0.0.0-dev"
#endif

namespace ttg {

inline constexpr std::string_view kVersion = TTG_VERSION;

}  // namespace ttg
