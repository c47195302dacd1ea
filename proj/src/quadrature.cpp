// quadrature.cpp - Gauss-Kronrod 15(7) adaptive rule on interior + 1/x-mapped tails
#include "cbs3/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace cbs3 {

namespace {

// Kronrod-15 abscissae on [-1,1] (positive half) and weights; the embedded
// Gauss-7 rule sits on nodes 1,3,5,7 of the Kronrod set.
constexpr double XK[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double WK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double WG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

// one interval, possibly living in the u = 1/x fold of a tail
struct Interval {
    double a, b;
    bool mapped; // if true: coordinate is u, point x = 1/u, weight 1/u^2
    cd value;
    double error;
};

struct Rule15Result {
    cd k15;
    double err;
};

Rule15Result rule15(const std::function<cd(double)>& f, const Interval& iv, long& evals) {
    const double c = 0.5 * (iv.a + iv.b);
    const double h = 0.5 * (iv.b - iv.a);
    cd k15 = 0.0, g7 = 0.0;

    auto eval = [&](double t) -> cd {
        ++evals;
        if (!iv.mapped) return f(t);
        const double x = 1.0 / t;
        return f(x) * (x * x); // dx = -du/u^2; orientation handled by limits
    };

    for (int i = 0; i < 8; ++i) {
        const int gauss_idx = (i % 2 == 1) ? (i - 1) / 2 : -1;
        if (i == 7) {
            const cd fc = eval(c);
            k15 += WK[7] * fc;
            g7 += WG[3] * fc;
        } else {
            const cd fp = eval(c + h * XK[i]);
            const cd fm = eval(c - h * XK[i]);
            k15 += WK[i] * (fp + fm);
            if (gauss_idx >= 0) g7 += WG[gauss_idx] * (fp + fm);
        }
    }
    k15 *= h;
    g7 *= h;
    return {k15, std::abs(k15 - g7)};
}

} // namespace

// The adaptive driver needs the integrand inside the loop; implementing it
// directly keeps the hot path free of indirection layers.
static QuadResult integrate_core(const std::function<cd(double)>& f,
                                 std::vector<Interval> work,
                                 const QuadratureConfig& cfg) {
    QuadResult res;
    if (work.empty()) {
        res.converged = true;
        return res;
    }
    long evals = 0;
    for (auto& iv : work) {
        const auto r = rule15(f, iv, evals);
        iv.value = r.k15;
        iv.error = r.err;
    }

    auto cmp = [&work](size_t i, size_t j) {
        if (work[i].error != work[j].error) return work[i].error < work[j].error;
        return i > j;
    };
    std::priority_queue<size_t, std::vector<size_t>, decltype(cmp)> heap(cmp);

    cd total = 0.0;
    double toterr = 0.0;
    for (size_t i = 0; i < work.size(); ++i) {
        total += work[i].value;
        toterr += work[i].error;
        heap.push(i);
    }

    auto tolerance = [&]() {
        return std::max(cfg.rel_tol * std::abs(total), cfg.abs_floor);
    };

    while (toterr > tolerance() && static_cast<int>(work.size()) < cfg.max_intervals &&
           !heap.empty()) {
        const size_t idx = heap.top();
        heap.pop();
        const Interval iv = work[idx];
        if (iv.error <= 0.0) continue;
        const double mid = 0.5 * (iv.a + iv.b);
        if (mid == iv.a || mid == iv.b) continue;

        Interval left{iv.a, mid, iv.mapped, cd(0.0), 0.0};
        Interval right{mid, iv.b, iv.mapped, cd(0.0), 0.0};
        const auto rl = rule15(f, left, evals);
        left.value = rl.k15;
        left.error = rl.err;
        const auto rr = rule15(f, right, evals);
        right.value = rr.k15;
        right.error = rr.err;

        total += left.value + right.value - iv.value;
        toterr += left.error + right.error - iv.error;

        work[idx] = left;
        heap.push(idx);
        work.push_back(right);
        heap.push(work.size() - 1);
    }

    res.value = total;
    res.abs_error = toterr;
    res.evals = evals;
    res.converged = (toterr <= tolerance());
    return res;
}

QuadResult integrate_segment(const std::function<cd(double)>& f, double a, double b,
                             const std::vector<double>& hints,
                             const QuadratureConfig& cfg) {
    if (!(b > a)) throw std::invalid_argument("integrate_segment: require b > a");
    std::vector<double> pts{a, b};
    for (double h : hints) {
        if (h > a && h < b) pts.push_back(h);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<Interval> work;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        work.push_back({pts[i], pts[i + 1], false, cd(0.0), 0.0});
    }
    return integrate_core(f, std::move(work), cfg);
}

QuadResult integrate_line(const std::function<cd(double)>& f, double cutoff,
                          const std::vector<double>& hints,
                          const QuadratureConfig& cfg) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("integrate_line: cutoff must be > 0");

    std::vector<double> pts{-cutoff, cutoff};
    for (double h : hints) {
        if (h > -cutoff && h < cutoff) pts.push_back(h);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<Interval> work;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        work.push_back({pts[i], pts[i + 1], false, cd(0.0), 0.0});
    }
    // tails through u = 1/x: x > cutoff  <->  u in (0, 1/cutoff]
    //                        x < -cutoff <->  u in [-1/cutoff, 0)
    work.push_back({0.0, 1.0 / cutoff, true, cd(0.0), 0.0});
    work.push_back({-1.0 / cutoff, 0.0, true, cd(0.0), 0.0});

    return integrate_core(f, std::move(work), cfg);
}

// ---- vector-valued line integration ----------------------------------------
// Mirrors the scalar driver with the interval error taken in the max norm, so
// the reported abs_error bounds every component of the result.

namespace {

struct IntervalV {
    double a, b;
    bool mapped;
    Eigen::VectorXcd value;
    double error;
};

void rule15_vec(const std::function<Eigen::VectorXcd(double)>& f, IntervalV& iv, long& evals) {
    const double c = 0.5 * (iv.a + iv.b);
    const double h = 0.5 * (iv.b - iv.a);

    auto eval = [&](double t) -> Eigen::VectorXcd {
        ++evals;
        if (!iv.mapped) return f(t);
        const double x = 1.0 / t;
        return f(x) * (x * x);
    };
    auto add = [](Eigen::VectorXcd& dst, double w, const Eigen::VectorXcd& v) {
        if (dst.size() == 0)
            dst = w * v;
        else
            dst += w * v;
    };

    Eigen::VectorXcd k15, g7;
    for (int i = 0; i < 8; ++i) {
        const int gauss_idx = (i % 2 == 1) ? (i - 1) / 2 : -1;
        if (i == 7) {
            const Eigen::VectorXcd fc = eval(c);
            add(k15, WK[7], fc);
            add(g7, WG[3], fc);
        } else {
            const Eigen::VectorXcd fs = eval(c + h * XK[i]) + eval(c - h * XK[i]);
            add(k15, WK[i], fs);
            if (gauss_idx >= 0) add(g7, WG[gauss_idx], fs);
        }
    }
    k15 *= h;
    g7 *= h;
    iv.error = (k15 - g7).cwiseAbs().maxCoeff();
    iv.value = std::move(k15);
}

} // namespace

QuadResultVec integrate_line_vec(const std::function<Eigen::VectorXcd(double)>& f,
                                 double cutoff, const std::vector<double>& hints,
                                 const QuadratureConfig& cfg) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("integrate_line_vec: cutoff must be > 0");

    std::vector<double> pts{-cutoff, cutoff};
    for (double h : hints) {
        if (h > -cutoff && h < cutoff) pts.push_back(h);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<IntervalV> work;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        work.push_back({pts[i], pts[i + 1], false, {}, 0.0});
    work.push_back({0.0, 1.0 / cutoff, true, {}, 0.0});
    work.push_back({-1.0 / cutoff, 0.0, true, {}, 0.0});

    QuadResultVec res;
    long evals = 0;
    for (auto& iv : work) rule15_vec(f, iv, evals);

    auto cmp = [&work](size_t i, size_t j) {
        if (work[i].error != work[j].error) return work[i].error < work[j].error;
        return i > j;
    };
    std::priority_queue<size_t, std::vector<size_t>, decltype(cmp)> heap(cmp);

    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(work.front().value.size());
    double toterr = 0.0;
    for (size_t i = 0; i < work.size(); ++i) {
        total += work[i].value;
        toterr += work[i].error;
        heap.push(i);
    }

    auto tolerance = [&]() {
        double scale = total.size() > 0 ? total.cwiseAbs().maxCoeff() : 0.0;
        return std::max(cfg.rel_tol * scale, cfg.abs_floor);
    };

    while (toterr > tolerance() && static_cast<int>(work.size()) < cfg.max_intervals &&
           !heap.empty()) {
        const size_t idx = heap.top();
        heap.pop();
        const IntervalV iv = work[idx];
        if (iv.error <= 0.0) continue;
        const double mid = 0.5 * (iv.a + iv.b);
        if (mid == iv.a || mid == iv.b) continue;

        IntervalV left{iv.a, mid, iv.mapped, {}, 0.0};
        IntervalV right{mid, iv.b, iv.mapped, {}, 0.0};
        rule15_vec(f, left, evals);
        rule15_vec(f, right, evals);

        total += left.value + right.value - iv.value;
        toterr += left.error + right.error - iv.error;

        work[idx] = std::move(left);
        heap.push(idx);
        work.push_back(std::move(right));
        heap.push(work.size() - 1);
    }

    res.converged = (toterr <= tolerance());
    res.value = std::move(total);
    res.abs_error = toterr;
    res.evals = evals;
    return res;
}

std::vector<double> mollow_hints(const AtomParams& p) {
    const double og = std::sqrt(std::norm(p.rabi) + p.detuning * p.detuning);
    return {0.0, og, -og, 2.0 * og, -2.0 * og};
}

double default_cutoff(const AtomParams& p, double scale) {
    return scale * std::max({p.gamma, std::abs(p.rabi), std::abs(p.detuning)});
}

} // namespace cbs3
