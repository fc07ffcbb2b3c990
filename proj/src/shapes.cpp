#include "fixtime/shapes.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fixtime/numerics.hpp"

namespace fixtime {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

ShapeFn make_shape(const std::string& name, double T_c) {
    ShapeFn s;
    s.name = name;
    s.domain_sup = inf;
    s.range_sup = inf;
    if (name == "id") {
        s.value = [](double z) { return z; };
        s.deriv = [](double) { return 1.0; };
        s.inverse = [](double u) { return u; };
        return s;
    }
    if (name == "log1p") {
        s.value = [](double z) { return std::log1p(z); };
        s.deriv = [](double z) { return 1.0 / (1.0 + z); };
        s.inverse = [](double u) { return std::expm1(u); };
        return s;
    }
    if (name == "sqrt") {
        s.value = [](double z) { return std::sqrt(z); };
        s.deriv = [](double z) { return 0.5 / std::sqrt(z); };
        s.inverse = [](double u) { return u * u; };
        return s;
    }
    if (name.rfind("pow:", 0) == 0) {
        double p;
        try {
            p = std::stod(name.substr(4));
        } catch (const std::exception&) {
            throw ValidationError("make_shape: cannot parse exponent in '" + name + "'");
        }
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw ValidationError("make_shape: pow exponent must satisfy p > 0");
        }
        s.value = [p](double z) { return std::pow(z, p); };
        s.deriv = [p](double z) { return p * std::pow(z, p - 1.0); };
        s.inverse = [p](double u) { return std::pow(u, 1.0 / p); };
        return s;
    }
    if (name == "ramp") {
        if (!(T_c > 0.0)) throw ValidationError("make_shape: ramp needs T_c > 0");
        s.domain_sup = T_c;
        s.range_sup = 1.0;
        s.value = [T_c](double z) { return z / T_c; };
        s.deriv = [T_c](double) { return 1.0 / T_c; };
        s.inverse = [T_c](double u) { return u * T_c; };
        return s;
    }
    throw ValidationError("make_shape: unknown shape '" + name +
                          "' (registry: id, log1p, sqrt, pow:<p>, ramp)");
}

void validate_shape(const ShapeFn& s) {
    if (!s.value || !s.deriv || !s.inverse) {
        throw ValidationError("shape '" + s.name + "': missing callable");
    }
    if (std::abs(s.value(0.0)) > 1e-12) {
        throw ValidationError("shape '" + s.name + "': value(0) must be 0");
    }
    const bool finite_dom = std::isfinite(s.domain_sup);
    const double z_hi = finite_dom ? s.domain_sup * (1.0 - 1e-9) : 1e9;

    // Log-spaced grid over the working part of the domain.
    std::vector<double> grid;
    const double lo = finite_dom ? s.domain_sup * 1e-9 : 1e-9;
    const double ratio = std::pow(z_hi / lo, 1.0 / 63.0);
    double z = lo;
    for (int i = 0; i <= 63; ++i, z *= ratio) grid.push_back(std::min(z, z_hi));

    double prev = 0.0;
    for (double g : grid) {
        const double v = s.value(g);
        if (!(v > prev)) {
            std::ostringstream os;
            os << "shape '" << s.name << "': value not strictly increasing at z=" << g;
            throw ValidationError(os.str());
        }
        prev = v;
        if (!(s.deriv(g) > 0.0)) {
            std::ostringstream os;
            os << "shape '" << s.name << "': deriv not positive at z=" << g;
            throw ValidationError(os.str());
        }
        const double back = s.inverse(v);
        if (std::abs(back - g) > 1e-9 * std::max(1.0, std::abs(g))) {
            std::ostringstream os;
            os << "shape '" << s.name << "': inverse roundtrip off at z=" << g
               << " (got " << back << ")";
            throw ValidationError(os.str());
        }
    }

    // Limit behavior at the domain end.
    if (std::isfinite(s.range_sup)) {
        const double v = s.value(z_hi);
        if (std::abs(v - s.range_sup) > 1e-6 * std::max(1.0, s.range_sup)) {
            std::ostringstream os;
            os << "shape '" << s.name << "': value(" << z_hi << ") = " << v
               << " does not approach range_sup = " << s.range_sup;
            throw ValidationError(os.str());
        }
    } else {
        // Unbounded range: still growing at the far end of the test grid.
        const double a = finite_dom ? s.domain_sup * (1.0 - 1e-6) : 1e6;
        if (!(s.value(z_hi) > s.value(a))) {
            throw ValidationError("shape '" + s.name +
                                  "': value does not keep growing toward +inf");
        }
    }
}

}  // namespace fixtime
