#pragma once

#include "anisopp/angular.hpp"
#include "anisopp/cli.hpp"
#include "anisopp/errors.hpp"
#include "anisopp/kmatrix.hpp"
#include "anisopp/matel.hpp"
#include "anisopp/operator_algebra.hpp"
#include "anisopp/pseudopotential.hpp"
#include "anisopp/render.hpp"
#include "anisopp/states.hpp"
#include "anisopp/trap.hpp"
