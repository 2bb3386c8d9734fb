#ifndef D2D_D2D_HPP
#define D2D_D2D_HPP

#include "d2d/numerics.hpp"
#include "d2d/fading.hpp"
#include "d2d/linkmodel.hpp"
#include "d2d/powerctl.hpp"
#include "d2d/metrics.hpp"
#include "d2d/scenario.hpp"
#include "d2d/montecarlo.hpp"
#include "d2d/config.hpp"
#include "d2d/sweep.hpp"

#endif  // D2D_D2D_HPP
