#pragma once

// Closed-form integrals of complex exponentials used by the pulse and dynamics
// modules. All routines stay accurate through the nu -> 0 limits.

#include "ionpar/core.hpp"

namespace ionpar::osc {

/// (e^z - 1) / z.
Complex phi1(Complex z);

/// int_a^b e^{i nu t} dt.
Complex integral(double nu, double a, double b);

/// int_a^b (t - (a+b)/2) e^{i nu t} dt.
Complex first_moment(double nu, double a, double b);

/// int_a^b dt2 int_a^{t2} dt1 e^{i x t2} e^{i y t1}.
Complex triangle(double x, double y, double a, double b);

}  // namespace ionpar::osc
