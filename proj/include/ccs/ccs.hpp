#pragma once

#include <ccs/errors.hpp>
#include <ccs/moments.hpp>
#include <ccs/quadrature.hpp>
#include <ccs/report.hpp>
#include <ccs/sequences.hpp>
#include <ccs/specialfn.hpp>
#include <ccs/states.hpp>
#include <ccs/weights.hpp>
