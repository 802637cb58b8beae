#pragma once

#include <filesystem>
#include <string>

#include "demotif/pwm.hpp"

namespace demotif {

// Sequence logo as standalone SVG 1.1. One stack per column on a 2-bit
// vertical axis; letter heights are p * IC, largest letter on top.
std::string render_logo_svg(const Pwm& pwm);

void emit_logo_svg(const Pwm& pwm, const std::filesystem::path& path);

}  // namespace demotif
