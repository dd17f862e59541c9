#pragma once

#include "nrquad/baselines.hpp"
#include "nrquad/expression.hpp"
#include "nrquad/quadrature.hpp"
#include "nrquad/report.hpp"
#include "nrquad/rootfind.hpp"
