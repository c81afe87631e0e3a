#pragma once

// Umbrella header.

#include "hasse/conics.hpp"
#include "hasse/errors.hpp"
#include "hasse/global.hpp"
#include "hasse/lifting.hpp"
#include "hasse/local.hpp"
#include "hasse/modarith.hpp"
#include "hasse/padic.hpp"
#include "hasse/quartic.hpp"
#include "hasse/system.hpp"
