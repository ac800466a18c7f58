#pragma once

#include "laplace/basis.hpp"
#include "laplace/cantor.hpp"
#include "laplace/config.hpp"
#include "laplace/errors.hpp"
#include "laplace/field.hpp"
#include "laplace/geometry.hpp"
#include "laplace/lsq.hpp"
#include "laplace/output.hpp"
#include "laplace/solver.hpp"
