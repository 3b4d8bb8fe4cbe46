#pragma once

#include "scipi/analysis.hpp"
#include "scipi/data_io.hpp"
#include "scipi/error.hpp"
#include "scipi/finite_diff.hpp"
#include "scipi/gmm.hpp"
#include "scipi/linalg.hpp"
#include "scipi/nmf.hpp"
#include "scipi/problem.hpp"
#include "scipi/problems.hpp"
#include "scipi/random.hpp"
#include "scipi/solvers.hpp"
