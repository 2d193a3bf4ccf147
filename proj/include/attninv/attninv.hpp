#pragma once

#include "attninv/analysis.hpp"
#include "attninv/checks.hpp"
#include "attninv/generate.hpp"
#include "attninv/gradient.hpp"
#include "attninv/hessian.hpp"
#include "attninv/io.hpp"
#include "attninv/model.hpp"
#include "attninv/oracle.hpp"
#include "attninv/report.hpp"
#include "attninv/rng.hpp"
#include "attninv/solver.hpp"
#include "attninv/types.hpp"
