#include "xsc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "xsc/errors.hpp"

namespace xsc {

namespace {

double offdiagonal_frobenius(const Eigen::MatrixXd& A) {
    double sum = 0.0;
    const Eigen::Index n = A.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < j; ++i) sum += A(i, j) * A(i, j);
    return std::sqrt(2.0 * sum);
}

// One Jacobi rotation in the (p, q) plane, applied as G^T A G with column
// passes only; rows are restored from symmetry afterwards.
inline void rotate(Eigen::MatrixXd& A, Eigen::MatrixXd& V, Eigen::Index p, Eigen::Index q) {
    const Eigen::Index n = A.rows();
    const double apq = A(p, q);
    const double app = A(p, p);
    const double aqq = A(q, q);

    const double theta = (aqq - app) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    double* __restrict cp = A.col(p).data();
    double* __restrict cq = A.col(q).data();
    for (Eigen::Index r = 0; r < n; ++r) {
        const double g = cp[r];
        const double h = cq[r];
        cp[r] = c * g - s * h;
        cq[r] = s * g + c * h;
    }
    A(p, p) = app - t * apq;
    A(q, q) = aqq + t * apq;
    A(p, q) = 0.0;
    A(q, p) = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        A(p, r) = cp[r];
        A(q, r) = cq[r];
    }

    double* __restrict vp = V.col(p).data();
    double* __restrict vq = V.col(q).data();
    for (Eigen::Index r = 0; r < n; ++r) {
        const double g = vp[r];
        const double h = vq[r];
        vp[r] = c * g - s * h;
        vq[r] = s * g + c * h;
    }
}

} // namespace

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw InvalidParameter("matrix must be square");
    if (M.size() == 0) throw InvalidParameter("matrix is empty");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidParameter("matrix is not symmetric within 1e-10");
    return 0.5 * (M + M.transpose());
}

} // namespace

EigenDecomposition sym_eigen(const Eigen::MatrixXd& M) {
    const Eigen::MatrixXd A = symmetrized(M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    if (solver.info() != Eigen::Success) {
        const double norm = std::max(A.norm(), 1e-300);
        // Residual of the best decomposition available.
        const double residual =
            (A * solver.eigenvectors() - solver.eigenvectors() * solver.eigenvalues().asDiagonal())
                .norm() /
            norm;
        throw NumericalFailure("symmetric eigensolver did not converge", residual);
    }
    EigenDecomposition out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    return out;
}

EigenDecomposition sym_eigen_jacobi(const Eigen::MatrixXd& M, const JacobiOptions& opts) {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXd A = symmetrized(M);
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
    const double norm_f = A.norm();

    if (norm_f > 0.0) {
        bool converged = false;
        for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
            double sum_abs = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index i = 0; i < j; ++i) sum_abs += std::abs(A(i, j));
            if (offdiagonal_frobenius(A) < opts.tol_rel * norm_f) {
                converged = true;
                break;
            }
            // Threshold strategy: skip small pivots on early sweeps, and zero
            // out entries that can no longer affect the diagonal.
            const double thresh =
                sweep <= 3 ? 0.2 * sum_abs / (static_cast<double>(n) * static_cast<double>(n))
                           : 0.0;
            for (Eigen::Index p = 0; p < n - 1; ++p) {
                for (Eigen::Index q = p + 1; q < n; ++q) {
                    const double apq = std::abs(A(p, q));
                    if (apq == 0.0) continue;
                    const double g = 100.0 * apq;
                    if (sweep > 4 && std::abs(A(p, p)) + g == std::abs(A(p, p)) &&
                        std::abs(A(q, q)) + g == std::abs(A(q, q))) {
                        A(p, q) = 0.0;
                        A(q, p) = 0.0;
                    } else if (apq > thresh) {
                        rotate(A, V, p, q);
                    }
                }
            }
        }
        if (!converged && offdiagonal_frobenius(A) >= opts.tol_rel * norm_f)
            throw NumericalFailure("Jacobi sweeps exhausted",
                                   offdiagonal_frobenius(A) / norm_f);
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (A(a, a) != A(b, b)) return A(a, a) < A(b, b);
        return a < b;
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues[k] = A(order[static_cast<std::size_t>(k)],
                               order[static_cast<std::size_t>(k)]);
        out.eigenvectors.col(k) = V.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

namespace {

// Index in [0, n) from one uniform draw.
std::size_t uniform_index(RandomStream& stream, std::size_t n) {
    const auto i = static_cast<std::size_t>(stream.next_open01() * static_cast<double>(n));
    return std::min(i, n - 1);
}

void plus_plus_init(const Eigen::MatrixXd& points, std::size_t K, RandomStream& stream,
                    Eigen::MatrixXd& centroids) {
    const Eigen::Index n = points.rows();
    centroids.row(0) = points.row(static_cast<Eigen::Index>(
        uniform_index(stream, static_cast<std::size_t>(n))));
    Eigen::VectorXd d2 =
        (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (std::size_t k = 1; k < K; ++k) {
        const double total = d2.sum();
        Eigen::Index pick;
        if (total <= 0.0) {
            pick = static_cast<Eigen::Index>(uniform_index(stream, static_cast<std::size_t>(n)));
        } else {
            const double r = stream.next_open01() * total;
            double cum = 0.0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum >= r) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.row(static_cast<Eigen::Index>(k)) = points.row(pick);
        d2 = d2.cwiseMin(
            (points.rowwise() - centroids.row(static_cast<Eigen::Index>(k))).rowwise().squaredNorm());
    }
}

struct LloydRun {
    std::vector<int> labels;
    Eigen::MatrixXd centroids;
    double inertia = 0.0;
    std::vector<double> history;
};

LloydRun lloyd_once(const Eigen::MatrixXd& points, std::size_t K, RandomStream& stream,
                    const KMeansOptions& opts) {
    const Eigen::Index n = points.rows();
    const Eigen::Index dim = points.cols();
    const auto Ki = static_cast<Eigen::Index>(K);

    LloydRun run;
    run.centroids.resize(Ki, dim);
    plus_plus_init(points, K, stream, run.centroids);
    run.labels.assign(static_cast<std::size_t>(n), 0);

    std::vector<Eigen::Index> counts(K);
    for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
        // Assignment, ties to the lowest centroid index.
        std::fill(counts.begin(), counts.end(), Eigen::Index{0});
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (points.row(i) - run.centroids.row(0)).squaredNorm();
            for (Eigen::Index k = 1; k < Ki; ++k) {
                const double d = (points.row(i) - run.centroids.row(k)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(k);
                }
            }
            run.labels[static_cast<std::size_t>(i)] = best;
            ++counts[static_cast<std::size_t>(best)];
        }

        // Repair empty clusters: move in the unclaimed point farthest from
        // its assigned centroid.
        std::vector<bool> claimed(static_cast<std::size_t>(n), false);
        for (Eigen::Index k = 0; k < Ki; ++k) {
            if (counts[static_cast<std::size_t>(k)] > 0) continue;
            Eigen::Index far = -1;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (claimed[static_cast<std::size_t>(i)]) continue;
                const int li = run.labels[static_cast<std::size_t>(i)];
                const double d = (points.row(i) - run.centroids.row(li)).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            const int old = run.labels[static_cast<std::size_t>(far)];
            --counts[static_cast<std::size_t>(old)];
            run.labels[static_cast<std::size_t>(far)] = static_cast<int>(k);
            ++counts[static_cast<std::size_t>(k)];
            run.centroids.row(k) = points.row(far);
            claimed[static_cast<std::size_t>(far)] = true;
        }

        // Update step.
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(Ki, dim);
        for (Eigen::Index i = 0; i < n; ++i)
            next.row(run.labels[static_cast<std::size_t>(i)]) += points.row(i);
        double shift = 0.0;
        for (Eigen::Index k = 0; k < Ki; ++k) {
            if (counts[static_cast<std::size_t>(k)] > 0)
                next.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
            else
                next.row(k) = run.centroids.row(k);
            shift = std::max(shift, (next.row(k) - run.centroids.row(k)).norm());
        }
        run.centroids = std::move(next);

        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            inertia +=
                (points.row(i) - run.centroids.row(run.labels[static_cast<std::size_t>(i)]))
                    .squaredNorm();
        run.history.push_back(inertia);
        if (shift < opts.tol) break;
    }

    // Final assignment against the final centroids; recompute the objective.
    run.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d = (points.row(i) - run.centroids.row(0)).squaredNorm();
        for (Eigen::Index k = 1; k < Ki; ++k) {
            const double d = (points.row(i) - run.centroids.row(k)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(k);
            }
        }
        run.labels[static_cast<std::size_t>(i)] = best;
        run.inertia += best_d;
    }
    return run;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t K, RandomStream& stream,
                    const KMeansOptions& opts) {
    const Eigen::Index n = points.rows();
    if (K < 1) throw InvalidParameter("K must be >= 1");
    if (static_cast<Eigen::Index>(K) > n) throw InvalidParameter("K exceeds the point count");
    if (opts.restarts < 1) throw InvalidParameter("restarts must be >= 1");

    std::optional<LloydRun> best;
    for (std::size_t r = 0; r < opts.restarts; ++r) {
        RandomStream sub = stream.substream(r);
        LloydRun run = lloyd_once(points, K, sub, opts);
        if (!best || run.inertia < best->inertia) best = std::move(run);
    }
    KMeansResult out;
    out.labels = std::move(best->labels);
    out.centroids = std::move(best->centroids);
    out.inertia = best->inertia;
    out.iteration_inertia = std::move(best->history);
    return out;
}

namespace {

LloydRun spherical_once(const Eigen::MatrixXd& points, std::size_t K, RandomStream& stream,
                        const KMeansOptions& opts) {
    const Eigen::Index n = points.rows();
    const Eigen::Index dim = points.cols();
    const auto Ki = static_cast<Eigen::Index>(K);

    LloydRun run;
    run.centroids.resize(Ki, dim);
    plus_plus_init(points, K, stream, run.centroids);
    for (Eigen::Index k = 0; k < Ki; ++k) {
        const double norm = run.centroids.row(k).norm();
        if (norm > 0.0) run.centroids.row(k) /= norm;
    }
    run.labels.assign(static_cast<std::size_t>(n), 0);

    std::vector<Eigen::Index> counts(K);
    for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
        // Assignment by cosine similarity, ties to the lowest index.
        std::fill(counts.begin(), counts.end(), Eigen::Index{0});
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_dot = points.row(i).dot(run.centroids.row(0));
            for (Eigen::Index k = 1; k < Ki; ++k) {
                const double dot = points.row(i).dot(run.centroids.row(k));
                if (dot > best_dot) {
                    best_dot = dot;
                    best = static_cast<int>(k);
                }
            }
            run.labels[static_cast<std::size_t>(i)] = best;
            ++counts[static_cast<std::size_t>(best)];
        }

        // Empty or degenerate clusters take the unclaimed angularly farthest point.
        std::vector<bool> claimed(static_cast<std::size_t>(n), false);
        auto reseed = [&](Eigen::Index k) {
            Eigen::Index far = -1;
            double far_dot = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < n; ++i) {
                if (claimed[static_cast<std::size_t>(i)]) continue;
                const int li = run.labels[static_cast<std::size_t>(i)];
                const double dot = points.row(i).dot(run.centroids.row(li));
                if (dot < far_dot) {
                    far_dot = dot;
                    far = i;
                }
            }
            const int old = run.labels[static_cast<std::size_t>(far)];
            --counts[static_cast<std::size_t>(old)];
            run.labels[static_cast<std::size_t>(far)] = static_cast<int>(k);
            ++counts[static_cast<std::size_t>(k)];
            run.centroids.row(k) = points.row(far);
            claimed[static_cast<std::size_t>(far)] = true;
        };
        for (Eigen::Index k = 0; k < Ki; ++k)
            if (counts[static_cast<std::size_t>(k)] == 0) reseed(k);

        // Update: normalized cluster means.
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(Ki, dim);
        for (Eigen::Index i = 0; i < n; ++i)
            sums.row(run.labels[static_cast<std::size_t>(i)]) += points.row(i);
        double shift = 0.0;
        for (Eigen::Index k = 0; k < Ki; ++k) {
            const double norm = sums.row(k).norm();
            if (norm < 1e-12) {
                reseed(k);
                shift = std::numeric_limits<double>::infinity(); // keep iterating
            } else {
                const Eigen::RowVectorXd next = sums.row(k) / norm;
                shift = std::max(shift, (next - run.centroids.row(k)).norm());
                run.centroids.row(k) = next;
            }
        }

        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            inertia +=
                (points.row(i) - run.centroids.row(run.labels[static_cast<std::size_t>(i)]))
                    .squaredNorm();
        run.history.push_back(inertia);
        if (shift < opts.tol) break;
    }

    run.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_dot = points.row(i).dot(run.centroids.row(0));
        for (Eigen::Index k = 1; k < Ki; ++k) {
            const double dot = points.row(i).dot(run.centroids.row(k));
            if (dot > best_dot) {
                best_dot = dot;
                best = static_cast<int>(k);
            }
        }
        run.labels[static_cast<std::size_t>(i)] = best;
        run.inertia += (points.row(i) - run.centroids.row(best)).squaredNorm();
    }
    return run;
}

} // namespace

KMeansResult spherical_kmeans(const Eigen::MatrixXd& points, std::size_t K, RandomStream& stream,
                              const KMeansOptions& opts) {
    const Eigen::Index n = points.rows();
    if (K < 1) throw InvalidParameter("K must be >= 1");
    if (static_cast<Eigen::Index>(K) > n) throw InvalidParameter("K exceeds the point count");
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(points.row(i).norm() - 1.0) > 1e-6)
            throw InvalidParameter("spherical k-means expects unit-norm rows");

    std::optional<LloydRun> best;
    for (std::size_t r = 0; r < opts.restarts; ++r) {
        RandomStream sub = stream.substream(r);
        LloydRun run = spherical_once(points, K, sub, opts);
        if (!best || run.inertia < best->inertia) best = std::move(run);
    }
    KMeansResult out;
    out.labels = std::move(best->labels);
    out.centroids = std::move(best->centroids);
    out.inertia = best->inertia;
    out.iteration_inertia = std::move(best->history);
    return out;
}

std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost) {
    const Eigen::Index R = cost.rows();
    const Eigen::Index C = cost.cols();
    if (R > C) throw InvalidParameter("assignment needs rows <= cols");
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Hungarian algorithm with potentials; 1-based auxiliary arrays.
    std::vector<double> u(static_cast<std::size_t>(R) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(C) + 1, 0.0);
    std::vector<Eigen::Index> way(static_cast<std::size_t>(C) + 1, 0);
    std::vector<Eigen::Index> matched(static_cast<std::size_t>(C) + 1, 0);

    for (Eigen::Index i = 1; i <= R; ++i) {
        matched[0] = i;
        Eigen::Index j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(C) + 1, kInf);
        std::vector<bool> used(static_cast<std::size_t>(C) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const Eigen::Index i0 = matched[static_cast<std::size_t>(j0)];
            double delta = kInf;
            Eigen::Index j1 = 0;
            for (Eigen::Index j = 1; j <= C; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (Eigen::Index j = 0; j <= C; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(matched[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (matched[static_cast<std::size_t>(j0)] != 0);
        do {
            const Eigen::Index j1 = way[static_cast<std::size_t>(j0)];
            matched[static_cast<std::size_t>(j0)] = matched[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(static_cast<std::size_t>(R));
    for (Eigen::Index j = 1; j <= C; ++j)
        if (matched[static_cast<std::size_t>(j)] > 0)
            row_to_col[static_cast<std::size_t>(matched[static_cast<std::size_t>(j)] - 1)] =
                static_cast<std::size_t>(j - 1);
    return row_to_col;
}

Matching best_matching(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth) {
    if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols())
        throw InvalidParameter("best_matching requires equal shapes");
    const Eigen::Index K = truth.rows();
    Eigen::MatrixXd cost(K, K);
    for (Eigen::Index j = 0; j < K; ++j)
        for (Eigen::Index i = 0; i < K; ++i)
            cost(j, i) = (estimated.row(i) - truth.row(j)).squaredNorm();
    Matching m;
    m.permutation = min_cost_assignment(cost);
    double total = 0.0;
    for (Eigen::Index j = 0; j < K; ++j)
        total += cost(j, static_cast<Eigen::Index>(m.permutation[static_cast<std::size_t>(j)]));
    m.frobenius_error = std::sqrt(total);
    return m;
}

double lanczos_gamma(double x) {
    // g = 7, n = 9 coefficients.
    static constexpr double coeff[9] = {
        0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
        771.32342877765313,   -176.61502916214059, 12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // Reflection formula.
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    }
    x -= 1.0;
    double a = coeff[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += coeff[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double expected_norm_std_normal(std::size_t d) {
    if (d < 1) throw InvalidParameter("dimension must be >= 1");
    const double dd = static_cast<double>(d);
    return std::sqrt(2.0) * lanczos_gamma((dd + 1.0) / 2.0) / lanczos_gamma(dd / 2.0);
}

} // namespace xsc
