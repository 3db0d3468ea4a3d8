#pragma once

// Umbrella header.

#include "ohba/core.hpp"
#include "ohba/enumeration.hpp"
#include "ohba/greedy.hpp"
#include "ohba/instance.hpp"
#include "ohba/json_io.hpp"
#include "ohba/matching.hpp"
#include "ohba/saturation.hpp"
#include "ohba/solver.hpp"
#include "ohba/transforms.hpp"
#include "ohba/verifier.hpp"
