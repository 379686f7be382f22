#pragma once

#include "wpgap/frcalc.hpp"

#include <string>

namespace wpgap {

// Parses an exponential polynomial in the variable l, e.g. "sinh(l/2)^2", "l*e^l",
// "exp(3l/2) - 2". Accepts + - * ^ (non-negative integer powers), division by
// constants, decimal or integer literals, implicit products such as "3l", and the
// functions exp, sinh, cosh applied to q*l. Throws invalid_argument otherwise.
ExpPolyFunction parseExpPoly(const std::string& text);

}  // namespace wpgap
