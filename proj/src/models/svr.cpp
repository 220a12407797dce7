#include "bulbar/models/svr.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <optional>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::models {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Solver over 2n variables: t < n carries alpha (sign +1), t >= n alpha* (sign -1).
class Smo {
public:
    Smo(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double c, double eps)
        : k_(k), n_(y.size()), c_(c), alpha_(2 * n_, 0.0), grad_(2 * n_), sign_(2 * n_) {
        for (Eigen::Index i = 0; i < n_; ++i) {
            sign_[i] = 1;
            sign_[i + n_] = -1;
            grad_[i] = eps - y(i);
            grad_[i + n_] = eps + y(i);
        }
    }

    /// Starts from alpha (length 2n, inside the box, equal sums).
    void warm_start(const std::vector<double>& alpha) {
        alpha_ = alpha;
        Eigen::VectorXd beta(n_);
        for (Eigen::Index i = 0; i < n_; ++i) beta(i) = alpha_[i] - alpha_[i + n_];
        const Eigen::VectorXd kb = k_ * beta;
        for (Eigen::Index i = 0; i < n_; ++i) {
            grad_[i] += kb(i);
            grad_[i + n_] -= kb(i);
        }
    }

    long solve(long max_iter, double tol, bool& converged) {
        long iter = 0;
        converged = false;
        while (iter < max_iter) {
            int i = -1, j = -1;
            if (!select(tol, i, j)) {
                converged = true;
                break;
            }
            update(i, j);
            ++iter;
        }
        return iter;
    }

    double rho() const {
        int free_count = 0;
        double ub = kInf, lb = -kInf, free_sum = 0.0;
        for (std::size_t t = 0; t < alpha_.size(); ++t) {
            const double yg = sign_[t] * grad_[t];
            if (upper(t)) {
                if (sign_[t] == -1) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else if (lower(t)) {
                if (sign_[t] == 1) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else {
                ++free_count;
                free_sum += yg;
            }
        }
        return free_count > 0 ? free_sum / free_count : (ub + lb) / 2.0;
    }

    Eigen::VectorXd coefficients() const {
        Eigen::VectorXd out(n_);
        for (Eigen::Index i = 0; i < n_; ++i) out(i) = alpha_[i] - alpha_[i + n_];
        return out;
    }

private:
    double q(std::size_t a, std::size_t b) const {
        return sign_[a] * sign_[b] * k_(static_cast<Eigen::Index>(a % n_), static_cast<Eigen::Index>(b % n_));
    }
    double qd(std::size_t a) const {
        const auto r = static_cast<Eigen::Index>(a % n_);
        return k_(r, r);
    }
    bool upper(std::size_t t) const { return alpha_[t] >= c_; }
    bool lower(std::size_t t) const { return alpha_[t] <= 0.0; }

    bool select(double tol, int& out_i, int& out_j) const {
        double gmax = -kInf;
        int gmax_idx = -1;
        for (std::size_t t = 0; t < alpha_.size(); ++t) {
            if (sign_[t] == 1) {
                if (!upper(t) && -grad_[t] >= gmax) {
                    gmax = -grad_[t];
                    gmax_idx = static_cast<int>(t);
                }
            } else if (!lower(t) && grad_[t] >= gmax) {
                gmax = grad_[t];
                gmax_idx = static_cast<int>(t);
            }
        }
        if (gmax_idx < 0) return false;
        const auto i = static_cast<std::size_t>(gmax_idx);

        double gmax2 = -kInf, obj_min = kInf;
        int gmin_idx = -1;
        for (std::size_t t = 0; t < alpha_.size(); ++t) {
            if (sign_[t] == 1) {
                if (lower(t)) continue;
                const double diff = gmax + grad_[t];
                gmax2 = std::max(gmax2, grad_[t]);
                if (diff > 0.0) {
                    const double quad = qd(i) + qd(t) - 2.0 * sign_[i] * q(i, t);
                    const double obj = -(diff * diff) / (quad > 0.0 ? quad : kTau);
                    if (obj <= obj_min) {
                        obj_min = obj;
                        gmin_idx = static_cast<int>(t);
                    }
                }
            } else {
                if (upper(t)) continue;
                const double diff = gmax - grad_[t];
                gmax2 = std::max(gmax2, -grad_[t]);
                if (diff > 0.0) {
                    const double quad = qd(i) + qd(t) + 2.0 * sign_[i] * q(i, t);
                    const double obj = -(diff * diff) / (quad > 0.0 ? quad : kTau);
                    if (obj <= obj_min) {
                        obj_min = obj;
                        gmin_idx = static_cast<int>(t);
                    }
                }
            }
        }
        if (gmax + gmax2 < tol || gmin_idx < 0) return false;
        out_i = gmax_idx;
        out_j = gmin_idx;
        return true;
    }

    void update(int ii, int jj) {
        const auto i = static_cast<std::size_t>(ii);
        const auto j = static_cast<std::size_t>(jj);
        const double old_i = alpha_[i], old_j = alpha_[j];
        double& ai = alpha_[i];
        double& aj = alpha_[j];
        const double qij = q(i, j);
        if (sign_[i] != sign_[j]) {
            double quad = qd(i) + qd(j) + 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) { aj = 0.0; ai = diff; }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > c_) { ai = c_; aj = c_ - diff; }
            } else if (aj > c_) {
                aj = c_;
                ai = c_ + diff;
            }
        } else {
            double quad = qd(i) + qd(j) - 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c_) {
                if (ai > c_) { ai = c_; aj = sum - c_; }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > c_) {
                if (aj > c_) { aj = c_; ai = sum - c_; }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        const double di = ai - old_i, dj = aj - old_j;
        const auto ri = static_cast<Eigen::Index>(i % n_);
        const auto rj = static_cast<Eigen::Index>(j % n_);
        for (std::size_t t = 0; t < alpha_.size(); ++t) {
            const auto rt = static_cast<Eigen::Index>(t % n_);
            grad_[t] += sign_[t] * (sign_[i] * k_(ri, rt) * di + sign_[j] * k_(rj, rt) * dj);
        }
    }

    const Eigen::MatrixXd& k_;
    Eigen::Index n_;
    double c_;
    std::vector<double> alpha_;
    std::vector<double> grad_;
    std::vector<int> sign_;
};


// Primal-dual interior point (Mehrotra predictor-corrector) on the linear
// primal over (w, b, xi, xi*). The linear kernel matrix has rank at most
// d + 1, which makes SMO crawl for large C; this gets close to the optimum
// in a few dozen Newton steps on a (d+1)-sized system. Returns the
// multipliers of the two tube constraints (alpha, alpha*), or nothing
// when it stalls.
std::optional<std::vector<double>> linear_ipm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double c,
                                              double eps) {
    const Eigen::Index n = x.rows(), p = x.cols() + 1;
    Eigen::MatrixXd xt(n, p);
    xt << x, Eigen::VectorXd::Ones(n);

    Eigen::VectorXd h(4 * n);
    h << (eps - y.array()).matrix(), (eps + y.array()).matrix(), Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd xi = Eigen::VectorXd::Constant(n, y.cwiseAbs().maxCoeff() + eps + 1.0);
    Eigen::VectorXd xs = xi;

    auto apply_g = [&](const Eigen::VectorXd& du, const Eigen::VectorXd& dxi, const Eigen::VectorXd& dxs) {
        const Eigen::VectorXd v = xt * du;
        Eigen::VectorXd g(4 * n);
        g << -v - dxi, v - dxs, -dxi, -dxs;
        return g;
    };

    Eigen::VectorXd s = (h - apply_g(u, xi, xs)).cwiseMax(1.0);
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(4 * n);
    const double scale_p = 1.0 + h.cwiseAbs().maxCoeff();
    const double scale_d = 1.0 + c;

    for (int iter = 0; iter < 200; ++iter) {
        const auto l1 = lam.segment(0, n), l2 = lam.segment(n, n), l3 = lam.segment(2 * n, n),
                   l4 = lam.segment(3 * n, n);
        Eigen::VectorXd rd_u = xt.transpose() * (l2 - l1);
        rd_u.head(p - 1) += u.head(p - 1);
        const Eigen::VectorXd rd_xi = (c - l1.array() - l3.array()).matrix();
        const Eigen::VectorXd rd_xs = (c - l2.array() - l4.array()).matrix();
        const Eigen::VectorXd rp = apply_g(u, xi, xs) + s - h;
        const double mu = s.dot(lam) / static_cast<double>(4 * n);

        const double res_p = rp.cwiseAbs().maxCoeff() / scale_p;
        const double res_d =
            std::max({rd_u.cwiseAbs().maxCoeff(), rd_xi.cwiseAbs().maxCoeff(), rd_xs.cwiseAbs().maxCoeff()}) / scale_d;
        if (res_p < 1e-8 && res_d < 1e-8 && mu < 1e-9 * scale_d) {
            std::vector<double> alpha(static_cast<std::size_t>(2 * n));
            for (Eigen::Index i = 0; i < n; ++i) {
                alpha[static_cast<std::size_t>(i)] = l1(i);
                alpha[static_cast<std::size_t>(i + n)] = l2(i);
            }
            return alpha;
        }
        if (!std::isfinite(mu) || !std::isfinite(res_p) || !std::isfinite(res_d)) return std::nullopt;

        const Eigen::ArrayXd d = lam.array() / s.array();
        const Eigen::ArrayXd d1 = d.segment(0, n), d2 = d.segment(n, n), d3 = d.segment(2 * n, n),
                             d4 = d.segment(3 * n, n);
        const Eigen::ArrayXd a = d1 + d3, b = d2 + d4;
        Eigen::MatrixXd schur = xt.transpose() * ((d1 * d3 / a + d2 * d4 / b).matrix().asDiagonal()) * xt;
        schur.diagonal().head(p - 1).array() += 1.0;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(schur);
        if (ldlt.info() != Eigen::Success) return std::nullopt;

        // Newton direction for complementarity residual rc.
        auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& ds, Eigen::VectorXd& dl) {
            const Eigen::VectorXd t = ((lam.array() * rp.array() - rc.array()) / s.array()).matrix();
            const Eigen::ArrayXd rhs_xi = -rd_xi.array() + t.segment(0, n).array() + t.segment(2 * n, n).array();
            const Eigen::ArrayXd rhs_xs = -rd_xs.array() + t.segment(n, n).array() + t.segment(3 * n, n).array();
            const Eigen::VectorXd rhs_u = -rd_u - xt.transpose() * (t.segment(n, n) - t.segment(0, n)) -
                                          xt.transpose() * (d1 * rhs_xi / a).matrix() +
                                          xt.transpose() * (d2 * rhs_xs / b).matrix();
            const Eigen::VectorXd du = ldlt.solve(rhs_u);
            const Eigen::ArrayXd v = (xt * du).array();
            const Eigen::VectorXd dxi = ((rhs_xi - d1 * v) / a).matrix();
            const Eigen::VectorXd dxs = ((rhs_xs + d2 * v) / b).matrix();
            const Eigen::VectorXd gdz = apply_g(du, dxi, dxs);
            dl = (d * gdz.array()).matrix() + t;
            ds = -rp - gdz;
            return std::make_tuple(du, dxi, dxs);
        };
        auto max_step = [&](const Eigen::VectorXd& ds, const Eigen::VectorXd& dl) {
            double step = 1.0;
            for (Eigen::Index i = 0; i < 4 * n; ++i) {
                if (ds(i) < 0.0) step = std::min(step, -s(i) / ds(i));
                if (dl(i) < 0.0) step = std::min(step, -lam(i) / dl(i));
            }
            return step;
        };

        Eigen::VectorXd ds, dl;
        direction((s.array() * lam.array()).matrix(), ds, dl);
        const double step_aff = max_step(ds, dl);
        const double mu_aff = (s + step_aff * ds).dot(lam + step_aff * dl) / static_cast<double>(4 * n);
        const double sigma = std::pow(mu_aff / mu, 3.0);
        const Eigen::VectorXd rc = (s.array() * lam.array() + ds.array() * dl.array() - sigma * mu).matrix();
        const auto [du, dxi, dxs] = direction(rc, ds, dl);
        const double step = std::min(1.0, 0.99 * max_step(ds, dl));
        u += step * du;
        xi += step * dxi;
        xs += step * dxs;
        s += step * ds;
        lam += step * dl;
    }
    return std::nullopt;
}

// Rounds interior-point multipliers onto the box and restores
// sum(alpha) = sum(alpha*) so SMO can continue from them.
std::vector<double> snap_to_box(std::vector<double> alpha, Eigen::Index n, double c) {
    const double tiny = 1e-6 * c;
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& a = alpha[static_cast<std::size_t>(i)];
        auto& as = alpha[static_cast<std::size_t>(i + n)];
        const double beta = a - as;
        a = std::clamp(beta, 0.0, c);
        as = std::clamp(-beta, 0.0, c);
        if (a < tiny) a = 0.0;
        if (as < tiny) as = 0.0;
        if (a > c - tiny) a = c;
        if (as > c - tiny) as = c;
    }
    double r = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        r += alpha[static_cast<std::size_t>(i)] - alpha[static_cast<std::size_t>(i + n)];
    }
    for (int pass = 0; pass < 2 && r != 0.0; ++pass) {
        for (std::size_t t = 0; t < alpha.size() && r != 0.0; ++t) {
            double& a = alpha[t];
            const bool free = a > 0.0 && a < c;
            if (pass == 0 && !free) continue;
            const double old = a;
            if (static_cast<Eigen::Index>(t) < n) {
                a = std::clamp(old - r, 0.0, c);
                r -= old - a;
            } else {
                a = std::clamp(old + r, 0.0, c);
                r -= a - old;
            }
        }
    }
    return alpha;
}

}  // namespace

double kernel_value(Kernel kernel, double gamma, const Eigen::Ref<const Eigen::RowVectorXd>& a,
                    const Eigen::Ref<const Eigen::RowVectorXd>& b) {
    switch (kernel) {
        case Kernel::Linear: return a.dot(b);
        case Kernel::Rbf: return std::exp(-gamma * (a - b).squaredNorm());
        case Kernel::Sigmoid: return std::tanh(gamma * a.dot(b));
    }
    return 0.0;
}

double scale_gamma(const Eigen::MatrixXd& x) {
    if (x.size() == 0) return 1.0;
    const double mean = x.mean();
    const double var = (x.array() - mean).square().mean();
    if (!(var > 0.0)) return 1.0;
    return 1.0 / (static_cast<double>(x.cols()) * var);
}

double SvrModel::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < coef.size(); ++i) {
        if (coef(i) != 0.0) sum += coef(i) * kernel_value(kernel, gamma, vectors.row(i), x);
    }
    return sum - rho;
}

Eigen::VectorXd SvrModel::predict(const Eigen::MatrixXd& x) const {
    if (x.rows() > 0 && x.cols() != vectors.cols()) {
        throw ValidationError(fmt::format("SVR expects {} columns, got {}", vectors.cols(), x.cols()));
    }
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) out(r) = predict_row(x.row(r));
    return out;
}

SvrModel train_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrSpec& spec,
                   const SvrSolverConfig& config) {
    validate(ModelSpec{spec});
    const Eigen::Index n = x.rows();
    if (n < 2) throw ValidationError(fmt::format("SVR needs at least 2 rows, got {}", n));
    if (y.size() != n) {
        throw ValidationError(fmt::format("SVR: {} rows but {} targets", n, y.size()));
    }

    SvrModel model;
    model.kernel = spec.kernel;
    model.gamma = scale_gamma(x);
    model.vectors = x;

    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            k(i, j) = k(j, i) = kernel_value(spec.kernel, model.gamma, x.row(i), x.row(j));
        }
    }

    Smo smo(k, y, spec.c, spec.epsilon);
    if (spec.kernel == Kernel::Linear) {
        if (auto start = linear_ipm(x, y, spec.c, spec.epsilon)) smo.warm_start(snap_to_box(std::move(*start), n, spec.c));
    }
    const double nd = static_cast<double>(n);
    const auto max_iter = static_cast<long>(config.max_iter_factor * nd * nd);
    model.iterations = smo.solve(max_iter, config.tolerance, model.converged);
    model.coef = smo.coefficients();
    model.rho = smo.rho();
    return model;
}

}  // namespace bulbar::models
