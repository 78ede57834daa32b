#pragma once

#include "dccut/instance.hpp"
#include "dccut/instance_io.hpp"
#include "dccut/mps.hpp"
#include "dccut/simplex.hpp"
#include "dccut/dca.hpp"
#include "dccut/cutgen.hpp"
#include "dccut/solver.hpp"
