#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace imig {

using Vec2 = Eigen::Vector2d;

/// Degrees above 2 are rejected everywhere; all benchmark spaces are
/// (bi-)linear or (bi-)quadratic.
inline constexpr int kMaxDegree = 2;

/// Open uniform knot vector over [x0, x1] with a fixed number of
/// equally sized nonzero spans. The first and last knots carry
/// multiplicity degree+1 so the basis interpolates the endpoints.
class KnotVector {
public:
    KnotVector() = default;

    static KnotVector openUniform(int degree, double x0, double x1, int ncells);

    int degree() const { return degree_; }
    int numCells() const { return ncells_; }
    int numFunctions() const { return ncells_ + degree_; }
    int numKnots() const { return numFunctions() + degree_ + 1; }

    double begin() const { return x0_; }
    double end() const { return x1_; }
    double spacing() const { return h_; }

    /// i-th knot of the full vector (repeated end knots included).
    double knot(int i) const;

    /// Nonzero span containing x; the final span is closed on the right.
    int findCell(double x) const;
    bool contains(double x) const { return x >= x0_ && x <= x1_; }

    double cellBegin(int c) const { return x0_ + c * h_; }
    double cellEnd(int c) const { return x0_ + (c + 1) * h_; }

    /// Values of the degree+1 basis functions supported on the span
    /// containing x. first is the index of the first of them.
    void evalBasis(double x, int& first, std::array<double, kMaxDegree + 1>& v) const;
    void evalBasisDeriv(double x, int& first, std::array<double, kMaxDegree + 1>& v,
                        std::array<double, kMaxDegree + 1>& dv) const;

    /// Inclusive cell range [supportBegin, supportEnd] of function i.
    int supportBegin(int i) const { return i - degree_ < 0 ? 0 : i - degree_; }
    int supportEnd(int i) const { return i < ncells_ - 1 ? i : ncells_ - 1; }

    double grevillePoint(int i) const;

private:
    int degree_ = 1;
    int ncells_ = 1;
    double x0_ = 0.0;
    double x1_ = 1.0;
    double h_ = 1.0;
};

/// Tensor-product B-spline space on an axis-aligned Cartesian grid.
/// Function and cell indices are flattened x-fastest.
class TensorBSplineSpace {
public:
    TensorBSplineSpace() = default;
    TensorBSplineSpace(KnotVector kx, KnotVector ky);

    const KnotVector& knots(int dir) const { return dir == 0 ? kx_ : ky_; }
    int degree(int dir) const { return knots(dir).degree(); }
    int numFunctions(int dir) const { return knots(dir).numFunctions(); }
    int numCells(int dir) const { return knots(dir).numCells(); }
    int numFunctions() const { return kx_.numFunctions() * ky_.numFunctions(); }
    int numCells() const { return kx_.numCells() * ky_.numCells(); }

    Vec2 origin() const { return {kx_.begin(), ky_.begin()}; }
    Vec2 corner() const { return {kx_.end(), ky_.end()}; }
    Vec2 spacing() const { return {kx_.spacing(), ky_.spacing()}; }

    int functionIndex(int ix, int iy) const { return iy * kx_.numFunctions() + ix; }
    std::pair<int, int> functionMulti(int flat) const {
        return {flat % kx_.numFunctions(), flat / kx_.numFunctions()};
    }
    int cellIndex(int cx, int cy) const { return cy * kx_.numCells() + cx; }
    std::pair<int, int> cellMulti(int flat) const {
        return {flat % kx_.numCells(), flat / kx_.numCells()};
    }

    bool contains(Vec2 x) const { return kx_.contains(x[0]) && ky_.contains(x[1]); }
    int cellAt(Vec2 x) const;

    /// {x0, y0, x1, y1} of a cell.
    std::array<double, 4> cellBox(int flatCell) const;
    Vec2 cellCenter(int flatCell) const;

    /// Inclusive cell-index bounds {cx0, cy0, cx1, cy1} of a function's support.
    std::array<int, 4> supportCells(int flatFn) const;

    Vec2 grevillePoint(int flatFn) const;

    struct BasisValues {
        int count = 0;
        std::array<int, 9> index{};
        std::array<double, 9> value{};
    };
    struct BasisGradients {
        int count = 0;
        std::array<int, 9> index{};
        std::array<Vec2, 9> gradient{};
    };

    /// Throws std::domain_error when x lies outside the space's domain.
    BasisValues evalBasis(Vec2 x) const;
    BasisGradients evalGradients(Vec2 x) const;

private:
    KnotVector kx_;
    KnotVector ky_;
};

TensorBSplineSpace makeUniformSpace(int degreeX, int degreeY, Vec2 origin, Vec2 extent,
                                    int cellsX, int cellsY);

/// Dyadic refinement coefficients: every coarse function written exactly
/// in the midpoint-refined basis. Univariate rows are stored per direction;
/// tensor rows are their outer products.
struct RefinementCoefficients {
    std::array<std::vector<std::vector<std::pair<int, double>>>, 2> rows;

    /// Expansion of coarse function (flat index) over fine flat indices.
    std::vector<std::pair<int, double>> tensorRow(const TensorBSplineSpace& coarse,
                                                  const TensorBSplineSpace& fine,
                                                  int coarseFlat) const;
};

/// Midpoint-insert every span in both directions.
std::pair<TensorBSplineSpace, RefinementCoefficients> dyadicRefine(
    const TensorBSplineSpace& coarse);

}  // namespace imig
