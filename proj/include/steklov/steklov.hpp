#pragma once

#include "steklov/errors.hpp"
#include "steklov/tolerances.hpp"
#include "steklov/linalg.hpp"
#include "steklov/graph.hpp"
#include "steklov/generators.hpp"
#include "steklov/canonical.hpp"
#include "steklov/graph_io.hpp"
#include "steklov/spectral.hpp"
#include "steklov/flows.hpp"
#include "steklov/theorems.hpp"
#include "steklov/enumerate.hpp"
#include "steklov/hunt.hpp"
