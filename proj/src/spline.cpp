#include "imig/spline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace imig {

KnotVector KnotVector::openUniform(int degree, double x0, double x1, int ncells) {
    if (degree < 1 || degree > kMaxDegree)
        throw std::invalid_argument("KnotVector: degree must be 1 or 2, got " +
                                    std::to_string(degree));
    if (ncells < 1) throw std::invalid_argument("KnotVector: need at least one cell");
    if (!(x1 > x0)) throw std::invalid_argument("KnotVector: empty interval");
    KnotVector kv;
    kv.degree_ = degree;
    kv.ncells_ = ncells;
    kv.x0_ = x0;
    kv.x1_ = x1;
    kv.h_ = (x1 - x0) / ncells;
    return kv;
}

double KnotVector::knot(int i) const {
    int k = i - degree_;
    if (k < 0) k = 0;
    if (k > ncells_) k = ncells_;
    return k == ncells_ ? x1_ : x0_ + k * h_;
}

int KnotVector::findCell(double x) const {
    int c = static_cast<int>(std::floor((x - x0_) / h_));
    if (c < 0) c = 0;
    if (c > ncells_ - 1) c = ncells_ - 1;  // right endpoint closed
    return c;
}

void KnotVector::evalBasis(double x, int& first, std::array<double, kMaxDegree + 1>& v) const {
    const int cell = findCell(x);
    const int span = cell + degree_;  // knot-span index in the full vector
    first = cell;                     // functions cell .. cell+degree live on this span
    std::array<double, kMaxDegree + 1> N{};
    std::array<double, kMaxDegree + 1> left{}, right{};
    N[0] = 1.0;
    for (int j = 1; j <= degree_; ++j) {
        left[j] = x - knot(span + 1 - j);
        right[j] = knot(span + j) - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double den = right[r + 1] + left[j - r];
            const double temp = den > 0.0 ? N[r] / den : 0.0;
            N[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        N[j] = saved;
    }
    v = N;
}

void KnotVector::evalBasisDeriv(double x, int& first, std::array<double, kMaxDegree + 1>& v,
                                std::array<double, kMaxDegree + 1>& dv) const {
    evalBasis(x, first, v);
    dv.fill(0.0);
    const int p = degree_;
    const int cell = first;
    const int span = cell + p;
    // degree p-1 values on the same span: low[j] = B_{cell+1+j, p-1}
    std::array<double, kMaxDegree + 1> low{};
    low[0] = 1.0;
    {
        std::array<double, kMaxDegree + 1> left{}, right{};
        for (int j = 1; j <= p - 1; ++j) {
            left[j] = x - knot(span + 1 - j);
            right[j] = knot(span + j) - x;
            double saved = 0.0;
            for (int r = 0; r < j; ++r) {
                const double den = right[r + 1] + left[j - r];
                const double temp = den > 0.0 ? low[r] / den : 0.0;
                low[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            low[j] = saved;
        }
    }
    for (int e = 0; e <= p; ++e) {
        const int i = cell + e;
        double a = 0.0, b = 0.0;
        if (e >= 1) {
            const double den = knot(i + p) - knot(i);
            if (den > 0.0) a = low[e - 1] / den;
        }
        if (e <= p - 1) {
            const double den = knot(i + p + 1) - knot(i + 1);
            if (den > 0.0) b = low[e] / den;
        }
        dv[e] = p * (a - b);
    }
}

double KnotVector::grevillePoint(int i) const {
    double s = 0.0;
    for (int k = 1; k <= degree_; ++k) s += knot(i + k);
    return s / degree_;
}

TensorBSplineSpace::TensorBSplineSpace(KnotVector kx, KnotVector ky)
    : kx_(std::move(kx)), ky_(std::move(ky)) {}

int TensorBSplineSpace::cellAt(Vec2 x) const {
    return cellIndex(kx_.findCell(x[0]), ky_.findCell(x[1]));
}

std::array<double, 4> TensorBSplineSpace::cellBox(int flatCell) const {
    const auto [cx, cy] = cellMulti(flatCell);
    return {kx_.cellBegin(cx), ky_.cellBegin(cy), kx_.cellEnd(cx), ky_.cellEnd(cy)};
}

Vec2 TensorBSplineSpace::cellCenter(int flatCell) const {
    const auto box = cellBox(flatCell);
    return {0.5 * (box[0] + box[2]), 0.5 * (box[1] + box[3])};
}

std::array<int, 4> TensorBSplineSpace::supportCells(int flatFn) const {
    const auto [ix, iy] = functionMulti(flatFn);
    return {kx_.supportBegin(ix), ky_.supportBegin(iy), kx_.supportEnd(ix), ky_.supportEnd(iy)};
}

Vec2 TensorBSplineSpace::grevillePoint(int flatFn) const {
    const auto [ix, iy] = functionMulti(flatFn);
    return {kx_.grevillePoint(ix), ky_.grevillePoint(iy)};
}

TensorBSplineSpace::BasisValues TensorBSplineSpace::evalBasis(Vec2 x) const {
    if (!contains(x))
        throw std::domain_error("evalBasis: point (" + std::to_string(x[0]) + ", " +
                                std::to_string(x[1]) + ") outside space domain");
    int fx = 0, fy = 0;
    std::array<double, kMaxDegree + 1> vx{}, vy{};
    kx_.evalBasis(x[0], fx, vx);
    ky_.evalBasis(x[1], fy, vy);
    BasisValues out;
    for (int j = 0; j <= ky_.degree(); ++j)
        for (int i = 0; i <= kx_.degree(); ++i) {
            out.index[out.count] = functionIndex(fx + i, fy + j);
            out.value[out.count] = vx[i] * vy[j];
            ++out.count;
        }
    return out;
}

TensorBSplineSpace::BasisGradients TensorBSplineSpace::evalGradients(Vec2 x) const {
    if (!contains(x))
        throw std::domain_error("evalGradients: point (" + std::to_string(x[0]) + ", " +
                                std::to_string(x[1]) + ") outside space domain");
    int fx = 0, fy = 0;
    std::array<double, kMaxDegree + 1> vx{}, vy{}, dx{}, dy{};
    kx_.evalBasisDeriv(x[0], fx, vx, dx);
    ky_.evalBasisDeriv(x[1], fy, vy, dy);
    BasisGradients out;
    for (int j = 0; j <= ky_.degree(); ++j)
        for (int i = 0; i <= kx_.degree(); ++i) {
            out.index[out.count] = functionIndex(fx + i, fy + j);
            out.gradient[out.count] = Vec2(dx[i] * vy[j], vx[i] * dy[j]);
            ++out.count;
        }
    return out;
}

TensorBSplineSpace makeUniformSpace(int degreeX, int degreeY, Vec2 origin, Vec2 extent,
                                    int cellsX, int cellsY) {
    return TensorBSplineSpace(
        KnotVector::openUniform(degreeX, origin[0], origin[0] + extent[0], cellsX),
        KnotVector::openUniform(degreeY, origin[1], origin[1] + extent[1], cellsY));
}

namespace {

// Boehm knot insertion applied to unit coefficient vectors: after inserting
// all of newKnots, rows[i] holds coarse function i expanded over the refined
// basis.
std::vector<std::vector<double>> insertionRows(std::vector<double> knots, int degree,
                                               const std::vector<double>& newKnots) {
    const int n0 = static_cast<int>(knots.size()) - degree - 1;
    std::vector<std::vector<double>> rows(n0);
    for (int i = 0; i < n0; ++i) {
        rows[i].assign(n0, 0.0);
        rows[i][i] = 1.0;
    }
    for (const double u : newKnots) {
        int k = 0;
        while (k + 1 < static_cast<int>(knots.size()) && knots[k + 1] <= u) ++k;
        const int nOld = static_cast<int>(rows[0].size());
        for (auto& row : rows) {
            std::vector<double> next(nOld + 1, 0.0);
            for (int i = 0; i < nOld + 1; ++i) {
                double alpha;
                if (i <= k - degree)
                    alpha = 1.0;
                else if (i > k)
                    alpha = 0.0;
                else
                    alpha = (u - knots[i]) / (knots[i + degree] - knots[i]);
                double val = 0.0;
                if (alpha != 0.0 && i < nOld) val += alpha * row[i];
                if (alpha != 1.0 && i > 0) val += (1.0 - alpha) * row[i - 1];
                next[i] = val;
            }
            row = std::move(next);
        }
        knots.insert(knots.begin() + (k + 1), u);
    }
    return rows;
}

std::vector<std::vector<std::pair<int, double>>> univariateRefinementRows(const KnotVector& kv) {
    std::vector<double> knots(kv.numKnots());
    for (int i = 0; i < kv.numKnots(); ++i) knots[i] = kv.knot(i);
    std::vector<double> mids(kv.numCells());
    for (int c = 0; c < kv.numCells(); ++c) mids[c] = 0.5 * (kv.cellBegin(c) + kv.cellEnd(c));
    auto dense = insertionRows(std::move(knots), kv.degree(), mids);
    std::vector<std::vector<std::pair<int, double>>> rows(dense.size());
    for (size_t i = 0; i < dense.size(); ++i)
        for (size_t j = 0; j < dense[i].size(); ++j)
            if (dense[i][j] != 0.0) rows[i].emplace_back(static_cast<int>(j), dense[i][j]);
    return rows;
}

}  // namespace

std::vector<std::pair<int, double>> RefinementCoefficients::tensorRow(
    const TensorBSplineSpace& coarse, const TensorBSplineSpace& fine, int coarseFlat) const {
    const auto [ix, iy] = coarse.functionMulti(coarseFlat);
    std::vector<std::pair<int, double>> out;
    for (const auto& [jy, cy] : rows[1][iy])
        for (const auto& [jx, cx] : rows[0][ix])
            out.emplace_back(fine.functionIndex(jx, jy), cx * cy);
    return out;
}

std::pair<TensorBSplineSpace, RefinementCoefficients> dyadicRefine(
    const TensorBSplineSpace& coarse) {
    TensorBSplineSpace fine(
        KnotVector::openUniform(coarse.degree(0), coarse.knots(0).begin(), coarse.knots(0).end(),
                                2 * coarse.numCells(0)),
        KnotVector::openUniform(coarse.degree(1), coarse.knots(1).begin(), coarse.knots(1).end(),
                                2 * coarse.numCells(1)));
    RefinementCoefficients rc;
    rc.rows[0] = univariateRefinementRows(coarse.knots(0));
    rc.rows[1] = univariateRefinementRows(coarse.knots(1));
    return {fine, rc};
}

}  // namespace imig
