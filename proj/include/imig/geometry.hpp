#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "imig/spline.hpp"

namespace imig {

/// Node grid of a bilinear scalar field: nx x ny cells, (nx+1) x (ny+1) nodes.
struct LinearGrid {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0;
    double dx = 1.0, dy = 1.0;

    double nodeX(int i) const { return x0 + i * dx; }
    double nodeY(int j) const { return y0 + j * dy; }
    int numNodes() const { return (nx + 1) * (ny + 1); }
};

/// Discretized level-set field: nodal coefficients on a bilinear grid.
/// The interpolant is evaluated patchwise; the field is defined on the
/// grid's box (queries clamp to it against roundoff).
class LevelSetField {
public:
    LevelSetField() = default;
    LevelSetField(LinearGrid grid, std::vector<double> nodal, double isoLevel = 0.0);

    const LinearGrid& grid() const { return grid_; }
    double isoLevel() const { return iso_; }
    double nodal(int i, int j) const { return nodal_[j * (grid_.nx + 1) + i]; }
    const std::vector<double>& nodalValues() const { return nodal_; }

    /// Bilinear interpolant value.
    double value(Vec2 x) const;

    /// Exact min/max of the interpolant over an axis-aligned rectangle.
    std::pair<double, double> rangeOnRect(const std::array<double, 4>& box) const;

    /// True when the iso-level strictly separates phases inside the box.
    bool cuts(const std::array<double, 4>& box) const {
        const auto [lo, hi] = rangeOnRect(box);
        return lo < iso_ && hi > iso_;
    }

    /// max - min nodal value; scales snapping tolerances.
    double nodalRange() const { return range_; }

    /// Magnitude of the bilinear mixed coefficient on the patch containing x,
    /// times dx*dy/4: bound for |interpolant - its linearization| there.
    double linearizationBound(Vec2 x) const;

private:
    LinearGrid grid_;
    std::vector<double> nodal_;
    double iso_ = 0.0;
    double range_ = 0.0;
};

/// Sample an analytic level-set function at the grid nodes. Throws
/// std::invalid_argument on non-finite nodal values.
LevelSetField discretizeLsf(const std::function<double(Vec2)>& analytic, const LinearGrid& grid,
                            double isoLevel = 0.0);

/// Plain-text grid file: header "nx ny x0 y0 dx dy iso", then row-major
/// nodal values (y-outer). Round-trips bit-exactly.
LevelSetField readLsfFile(const std::string& path);
void writeLsfFile(const LevelSetField& field, const std::string& path);

/// Material parameters; lambda/mu are plane-strain Lame constants.
struct Material {
    std::string name = "material";
    double kappa = 1.0;
    double youngs = 1.0;
    double poisson = 0.3;
    double lambda = 0.0;
    double mu = 0.0;
    double alpha = 0.0;        // thermal expansion
    double eigenstrain = 0.0;  // isotropic inelastic strain
};

Material makeMaterialEnu(std::string name, double kappa, double E, double nu, double alpha = 0.0,
                         double eigenstrain = 0.0);
Material makeMaterialLame(std::string name, double kappa, double lambda, double mu,
                          double alpha = 0.0, double eigenstrain = 0.0);

inline constexpr int kVoidMaterial = -1;

/// Phase index -> material id map plus the material table.
struct PhaseConfig {
    int numFields = 0;
    std::vector<int> phaseToMaterial;  // size 2^numFields, kVoidMaterial for void
    std::vector<Material> materials;

    int materialOf(int phase) const { return phaseToMaterial[phase]; }
    const Material& material(int id) const { return materials[id]; }
    void validate() const;  // every phase mapped, at least one non-void
};

/// Phase index at x: bit j set iff field j's interpolant >= its iso-level.
int phaseAt(std::span<const LevelSetField> fields, Vec2 x);

}  // namespace imig
