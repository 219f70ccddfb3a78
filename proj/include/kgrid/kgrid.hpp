#pragma once

#include "kgrid/grid.hpp"
#include "kgrid/words.hpp"
#include "kgrid/screens.hpp"
#include "kgrid/tau.hpp"
#include "kgrid/generate.hpp"
#include "kgrid/oracle.hpp"
#include "kgrid/io.hpp"
