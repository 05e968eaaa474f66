#pragma once

#include "rainbowlab/bounds.hpp"
#include "rainbowlab/budget.hpp"
#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"
#include "rainbowlab/family_io.hpp"
#include "rainbowlab/match_search.hpp"
#include "rainbowlab/matching.hpp"
#include "rainbowlab/nullsatz.hpp"
#include "rainbowlab/randmatch.hpp"
#include "rainbowlab/rng.hpp"
#include "rainbowlab/sequence.hpp"
#include "rainbowlab/shift.hpp"
#include "rainbowlab/spread.hpp"
#include "rainbowlab/symmetry.hpp"

namespace rainbowlab {
inline constexpr const char* kVersion = "1.0.0";
}
