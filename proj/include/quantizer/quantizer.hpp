#pragma once

#include "quantizer/atlas.hpp"
#include "quantizer/bergman.hpp"
#include "quantizer/errors.hpp"
#include "quantizer/fubini_study.hpp"
#include "quantizer/numerics.hpp"
#include "quantizer/oscillator.hpp"
#include "quantizer/picard.hpp"
#include "quantizer/qh_bundle.hpp"
#include "quantizer/sections.hpp"

namespace quantizer {
inline constexpr const char* kVersion = "0.1.0";
}
