#pragma once

#include "segre/errors.hpp"
#include "segre/gaussian_rational.hpp"
#include "segre/var_space.hpp"
#include "segre/series.hpp"
#include "segre/expression.hpp"
#include "segre/linalg.hpp"
#include "segre/generic_rank.hpp"
#include "segre/vector_field.hpp"
#include "segre/manifold.hpp"
#include "segre/chains.hpp"
#include "segre/invariants.hpp"
#include "segre/lie.hpp"
#include "segre/orbit.hpp"
#include "segre/manifest.hpp"
