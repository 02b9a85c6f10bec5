#pragma once

#include "mkdv/airy.hpp"
#include "mkdv/painleve.hpp"
