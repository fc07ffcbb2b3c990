#pragma once

#include <functional>
#include <string>

namespace fixtime {

// A class K_a^b function: strictly increasing C1 map on [0, a) with
// value(0) = 0 and value -> b as z -> a. Carries its analytic derivative
// and exact inverse; the gain formulas multiply by h'(z) near a singular
// endpoint, where numerical differentiation would be junk.
struct ShapeFn {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> inverse;
    double domain_sup = 0.0;  // the a in K_a^b, may be +inf
    double range_sup = 0.0;   // the b in K_a^b, may be +inf
};

// Registry: "id", "log1p", "sqrt", "pow:<p>" (all K_inf^inf), and "ramp"
// (z/T_c, the K_{T_c}^1 profile used by time-base generators).
ShapeFn make_shape(const std::string& name, double T_c = 1.0);

// Sampled checks of the ShapeFn invariants: value(0)=0, strict growth,
// positive derivative, inverse roundtrip to 1e-9, limit at domain_sup.
// Throws ValidationError naming the failed property.
void validate_shape(const ShapeFn& s);

}  // namespace fixtime
