#pragma once

#include "relpos/errors.hpp"
#include "relpos/linalg.hpp"
#include "relpos/two_subspaces.hpp"
#include "relpos/systems.hpp"
#include "relpos/brenner.hpp"
#include "relpos/pentagon.hpp"
#include "relpos/catalog.hpp"
