#ifndef CHOW_CHOW_HPP
#define CHOW_CHOW_HPP

#include "chow/chern.hpp"
#include "chow/dsl.hpp"
#include "chow/grasstower.hpp"
#include "chow/integer.hpp"
#include "chow/polyring.hpp"
#include "chow/so4pipeline.hpp"
#include "chow/zgraded.hpp"

namespace chow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chow

#endif  // CHOW_CHOW_HPP
