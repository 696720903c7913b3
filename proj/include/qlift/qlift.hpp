#pragma once

#include "qlift/core.hpp"
#include "qlift/operator_algebra.hpp"
#include "qlift/matrix_exponential.hpp"
#include "qlift/master_equation.hpp"
#include "qlift/effective_propagation.hpp"
#include "qlift/qubit_analytic.hpp"
#include "qlift/cavity_analytic.hpp"
#include "qlift/scenario.hpp"
#include "qlift/runner.hpp"
