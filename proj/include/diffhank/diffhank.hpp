#pragma once

#include "diffhank/measure.hpp"
#include "diffhank/quadrature.hpp"
#include "diffhank/transforms.hpp"
#include "diffhank/criteria.hpp"
#include "diffhank/discrete_operator.hpp"
#include "diffhank/io.hpp"
#include "diffhank/commands.hpp"
