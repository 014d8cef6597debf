#pragma once

#include "emden_dq/kernels.hpp"
#include "emden_dq/numerics/brent.hpp"
#include "emden_dq/numerics/dense_matrix.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/lu.hpp"
#include "emden_dq/numerics/newton.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/oracles/exact.hpp"
#include "emden_dq/oracles/runge_kutta.hpp"
#include "emden_dq/problems/catalog.hpp"
#include "emden_dq/problems/problem.hpp"
#include "emden_dq/problems/residual.hpp"
#include "emden_dq/problems/solve.hpp"
#include "emden_dq/quadrature/interpolant.hpp"
#include "emden_dq/quadrature/nodes.hpp"
#include "emden_dq/quadrature/weights.hpp"
