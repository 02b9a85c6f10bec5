#pragma once

#include "mkdv/asymptotics.hpp"
#include "mkdv/harness.hpp"
#include "mkdv/pde_reference.hpp"
#include "mkdv/rh_model.hpp"
#include "mkdv/scattering.hpp"
#include "mkdv/special.hpp"
