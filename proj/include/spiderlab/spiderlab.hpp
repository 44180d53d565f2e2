#pragma once

#include "spiderlab/charges.hpp"
#include "spiderlab/control.hpp"
#include "spiderlab/cspace.hpp"
#include "spiderlab/fixtures.hpp"
#include "spiderlab/geom.hpp"
#include "spiderlab/morse.hpp"
#include "spiderlab/oracle.hpp"
#include "spiderlab/potentials.hpp"
#include "spiderlab/svg.hpp"
#include "spiderlab/workspace.hpp"
