#include "fixtime/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace fixtime {

void IntegratorConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw ValidationError(std::string("IntegratorConfig: ") + name +
                                  " must be positive");
        }
    };
    positive(rel_tol, "rel_tol");
    positive(abs_tol, "abs_tol");
    positive(eps_settle, "eps_settle");
    positive(horizon_guard, "horizon_guard");
    positive(gain_cap, "gain_cap");
    if (max_steps == 0) throw ValidationError("IntegratorConfig: max_steps must be positive");
    if (!(horizon_guard < 1.0)) {
        throw ValidationError("IntegratorConfig: horizon_guard must be below 1");
    }
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Match: return "Match";
        case Verdict::PredictUnreached: return "PredictUnreached";
        case Verdict::Diverged: return "Diverged";
    }
    return "?";
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::Settled: return "settled";
        case StopReason::Horizon: return "horizon";
        case StopReason::Budget: return "budget";
    }
    return "?";
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights (positive half, node 0 last).
constexpr double kron_x[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double kron_w[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
// Gauss-7 weights attach to kron_x[1], [3], [5], [7].
constexpr double gauss_w[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Panel {
    double lo, hi;
    double value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

Panel gk15(const std::function<double(double)>& f, double lo, double hi,
           std::size_t& evals) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double kron = kron_w[7] * f(c);
    double gauss = gauss_w[3] * f(c);
    evals += 1;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kron_x[i];
        const double fs = f(c - dx) + f(c + dx);
        evals += 2;
        kron += kron_w[i] * fs;
        if (i % 2 == 1) gauss += gauss_w[i / 2] * fs;
    }
    kron *= h;
    gauss *= h;
    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.value = kron;
    p.error = std::abs(kron - gauss);
    if (!std::isfinite(p.value)) {
        std::ostringstream os;
        os << "quad: non-finite integrand value on [" << lo << ", " << hi << "]";
        throw NumericalError(os.str());
    }
    return p;
}

QuadratureResult adapt(const std::function<double(double)>& f,
                       const std::vector<double>& knots, double tol) {
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> work;
    std::size_t evals = 0;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        Panel p = gk15(f, knots[i], knots[i + 1], evals);
        total += p.value;
        err += p.error;
        work.push(p);
    }
    // Bounded oscillatory tails cost roughly 0.3/tol panels to certify, so the
    // budget has to be generous; memory stays in the tens of megabytes.
    const std::size_t max_panels = 250000;
    std::size_t panels = knots.size() - 1;
    while (err > tol && !work.empty()) {
        if (panels >= max_panels) {
            std::ostringstream os;
            os << "quad: subdivision limit reached, best estimate " << total
               << " with error estimate " << err;
            throw NumericalError(os.str());
        }
        Panel worst = work.top();
        work.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            // Interval collapsed to machine resolution; keep its contribution.
            continue;
        }
        Panel a = gk15(f, worst.lo, mid, evals);
        Panel b = gk15(f, mid, worst.hi, evals);
        total += a.value + b.value - worst.value;
        err += a.error + b.error - worst.error;
        work.push(a);
        work.push(b);
        ++panels;
    }
    if (err > tol) {
        // Every remaining panel collapsed to machine resolution.
        std::ostringstream os;
        os << "quad: intervals exhausted at machine resolution, best estimate " << total
           << " with error estimate " << err;
        throw NumericalError(os.str());
    }
    QuadratureResult r;
    r.value = total;
    r.abs_error_estimate = std::max(err, 0.0);
    r.evaluations = std::max<std::size_t>(evals, 1);
    return r;
}

}  // namespace

QuadratureResult quad_knots(const std::function<double(double)>& f,
                            const std::vector<double>& knots, double tol) {
    if (knots.size() < 2) throw ValidationError("quad_knots: need at least two knots");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i] < knots[i + 1]) || !std::isfinite(knots[i + 1])) {
            throw ValidationError("quad_knots: knots must be finite and increasing");
        }
    }
    if (!(tol > 0.0)) throw ValidationError("quad_knots: tol must be positive");
    return adapt(f, knots, tol);
}

QuadratureResult quad(const std::function<double(double)>& f, double lo, double hi,
                      double tol) {
    if (!(tol > 0.0)) throw ValidationError("quad: tol must be positive");
    if (!std::isfinite(lo)) throw ValidationError("quad: lower limit must be finite");
    if (std::isinf(hi)) {
        if (lo < 0.0) throw ValidationError("quad: infinite upper limit needs lo >= 0");
        // u = z/(1+z) maps [lo, inf) onto [lo/(1+lo), 1); dz = du/(1-u)^2.
        auto g = [&f](double u) {
            const double om = 1.0 - u;
            return f(u / om) / (om * om);
        };
        return adapt(g, {lo / (1.0 + lo), 1.0}, tol);
    }
    if (!(lo < hi)) throw ValidationError("quad: limits must satisfy lo < hi");
    return adapt(f, {lo, hi}, tol);
}

namespace {

RootResult solve_bracketed(const std::function<double(double)>& f,
                           const std::function<double(double)>* df, double lo, double hi,
                           double tol) {
    if (!(lo <= hi)) throw ValidationError("root_bracketed: lo must not exceed hi");
    if (!(tol > 0.0)) throw ValidationError("root_bracketed: tol must be positive");
    double flo = f(lo);
    double fhi = f(hi);
    std::size_t iters = 2;
    if (std::abs(flo) <= tol) return {lo, flo, iters, lo, hi};
    if (std::abs(fhi) <= tol) return {hi, fhi, iters, lo, hi};
    if (flo * fhi > 0.0) {
        std::ostringstream os;
        os << "root_bracketed: no sign change on [" << lo << ", " << hi << "] (f(lo)="
           << flo << ", f(hi)=" << fhi << ")";
        throw ValidationError(os.str());
    }

    // Bisect; once the bracket is modestly tight and a derivative is
    // available, try Newton from the midpoint, falling back whenever the step
    // leaves the bracket.
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    ++iters;
    const double coarse = 1e-3 * (hi - lo);
    const std::size_t max_iters = 300;
    while (iters < max_iters) {
        if (std::abs(fx) <= tol || (hi - lo) <= tol) break;
        if (fx * flo < 0.0) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        double next = 0.5 * (lo + hi);
        if (df && (hi - lo) <= coarse) {
            const double d = (*df)(x);
            if (std::isfinite(d) && d != 0.0) {
                const double cand = x - fx / d;
                if (cand > lo && cand < hi) next = cand;
            }
        }
        x = next;
        fx = f(x);
        ++iters;
    }
    return {x, fx, iters, lo, hi};
}

}  // namespace

RootResult root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    return solve_bracketed(f, nullptr, lo, hi, tol);
}

RootResult root_bracketed(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi,
                          double tol) {
    return solve_bracketed(f, &df, lo, hi, tol);
}

}  // namespace fixtime
