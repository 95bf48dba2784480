#pragma once

#include "subsidylab/games.hpp"

namespace subsidylab {

// Bundled worked examples, used by the golden tests and the end-to-end
// reproduction command. The data files under data/ mirror these exactly.

// Two components in series, p = (0.5, 0.5), costs (0.3, 0.3).
MaintenanceGame example1_game();

// Two components in series, p = (0.4, 0.1), costs (0.3, 0.3); the
// interesting inspection is component 1.
MaintenanceGame example2_game();

// Two agents, four actions (A shared, D private to agent 1, B and C private
// to agent 2), two equiprobable worlds that swap which private action of
// agent 2 is cheap.
CostSharingGame example3_game();

}  // namespace subsidylab
