#pragma once

#include "exogate/admittance.hpp"
#include "exogate/biomech.hpp"
#include "exogate/error.hpp"
#include "exogate/fsm.hpp"
#include "exogate/smoothstep.hpp"
#include "exogate/visiongate.hpp"
#include "exogate/simkit/metrics.hpp"
#include "exogate/simkit/perception.hpp"
#include "exogate/simkit/scenario.hpp"
#include "exogate/simkit/simulate.hpp"
#include "exogate/simkit/trajectory.hpp"
