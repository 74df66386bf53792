#pragma once

#include "fictitious_play.hpp"
#include "game.hpp"
#include "gamefile.hpp"
#include "lp.hpp"
#include "oracle.hpp"
#include "rational.hpp"
#include "synthesis.hpp"
#include "trajectory.hpp"
