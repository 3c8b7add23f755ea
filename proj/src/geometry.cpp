#include "imig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace imig {

LevelSetField::LevelSetField(LinearGrid grid, std::vector<double> nodal, double isoLevel)
    : grid_(grid), nodal_(std::move(nodal)), iso_(isoLevel) {
    if (static_cast<int>(nodal_.size()) != grid_.numNodes())
        throw std::invalid_argument("LevelSetField: nodal value count does not match grid");
    double lo = nodal_[0], hi = nodal_[0];
    for (double v : nodal_) {
        if (!std::isfinite(v))
            throw std::invalid_argument("LevelSetField: non-finite nodal value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    range_ = hi - lo;
}

double LevelSetField::value(Vec2 x) const {
    double sx = (x[0] - grid_.x0) / grid_.dx;
    double sy = (x[1] - grid_.y0) / grid_.dy;
    int i = static_cast<int>(std::floor(sx));
    int j = static_cast<int>(std::floor(sy));
    i = std::clamp(i, 0, grid_.nx - 1);
    j = std::clamp(j, 0, grid_.ny - 1);
    const double tx = sx - i;
    const double ty = sy - j;
    const double v00 = nodal(i, j), v10 = nodal(i + 1, j);
    const double v01 = nodal(i, j + 1), v11 = nodal(i + 1, j + 1);
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 +
           tx * ty * v11;
}

std::pair<double, double> LevelSetField::rangeOnRect(const std::array<double, 4>& box) const {
    // A bilinear patch attains its extrema at rectangle corners, so the range
    // over the box is the range of the patch-clipped corner values.
    const int i0 = std::clamp(static_cast<int>(std::floor((box[0] - grid_.x0) / grid_.dx)), 0,
                              grid_.nx - 1);
    const int j0 = std::clamp(static_cast<int>(std::floor((box[1] - grid_.y0) / grid_.dy)), 0,
                              grid_.ny - 1);
    const int i1 = std::clamp(static_cast<int>(std::ceil((box[2] - grid_.x0) / grid_.dx)) - 1, 0,
                              grid_.nx - 1);
    const int j1 = std::clamp(static_cast<int>(std::ceil((box[3] - grid_.y0) / grid_.dy)) - 1, 0,
                              grid_.ny - 1);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int j = j0; j <= std::max(j0, j1); ++j)
        for (int i = i0; i <= std::max(i0, i1); ++i) {
            const double ax = std::max(box[0], grid_.nodeX(i));
            const double bx = std::min(box[2], grid_.nodeX(i + 1));
            const double ay = std::max(box[1], grid_.nodeY(j));
            const double by = std::min(box[3], grid_.nodeY(j + 1));
            if (ax > bx || ay > by) continue;
            for (double px : {ax, bx})
                for (double py : {ay, by}) {
                    const double v = value({px, py});
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
        }
    return {lo, hi};
}

double LevelSetField::linearizationBound(Vec2 x) const {
    const int i = std::clamp(static_cast<int>(std::floor((x[0] - grid_.x0) / grid_.dx)), 0,
                             grid_.nx - 1);
    const int j = std::clamp(static_cast<int>(std::floor((x[1] - grid_.y0) / grid_.dy)), 0,
                             grid_.ny - 1);
    const double mixed = nodal(i, j) + nodal(i + 1, j + 1) - nodal(i + 1, j) - nodal(i, j + 1);
    return 0.25 * std::abs(mixed);
}

LevelSetField discretizeLsf(const std::function<double(Vec2)>& analytic, const LinearGrid& grid,
                            double isoLevel) {
    std::vector<double> nodal(grid.numNodes());
    for (int j = 0; j <= grid.ny; ++j)
        for (int i = 0; i <= grid.nx; ++i)
            nodal[j * (grid.nx + 1) + i] = analytic({grid.nodeX(i), grid.nodeY(j)});
    return LevelSetField(grid, std::move(nodal), isoLevel);
}

LevelSetField readLsfFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open LSF grid file: " + path);
    LinearGrid g;
    double iso = 0.0;
    in >> g.nx >> g.ny >> g.x0 >> g.y0 >> g.dx >> g.dy >> iso;
    if (!in) throw std::runtime_error("malformed LSF grid header in " + path);
    std::vector<double> nodal(g.numNodes());
    for (double& v : nodal)
        if (!(in >> v)) throw std::runtime_error("truncated LSF grid data in " + path);
    return LevelSetField(g, std::move(nodal), iso);
}

void writeLsfFile(const LevelSetField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write LSF grid file: " + path);
    const auto& g = field.grid();
    char buf[64];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
        out << buf;
    };
    out << g.nx << ' ' << g.ny << ' ';
    put(g.x0, ' ');
    put(g.y0, ' ');
    put(g.dx, ' ');
    put(g.dy, ' ');
    put(field.isoLevel(), '\n');
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) put(field.nodal(i, j), i == g.nx ? '\n' : ' ');
    }
}

Material makeMaterialEnu(std::string name, double kappa, double E, double nu, double alpha,
                         double eigenstrain) {
    Material m;
    m.name = std::move(name);
    m.kappa = kappa;
    m.youngs = E;
    m.poisson = nu;
    m.lambda = E * nu / ((1 + nu) * (1 - 2 * nu));  // plane strain
    m.mu = E / (2 * (1 + nu));
    m.alpha = alpha;
    m.eigenstrain = eigenstrain;
    return m;
}

Material makeMaterialLame(std::string name, double kappa, double lambda, double mu, double alpha,
                          double eigenstrain) {
    Material m;
    m.name = std::move(name);
    m.kappa = kappa;
    m.lambda = lambda;
    m.mu = mu;
    m.youngs = mu * (3 * lambda + 2 * mu) / (lambda + mu);
    m.poisson = lambda / (2 * (lambda + mu));
    m.alpha = alpha;
    m.eigenstrain = eigenstrain;
    return m;
}

void PhaseConfig::validate() const {
    const size_t expected = size_t{1} << numFields;
    if (phaseToMaterial.size() != expected)
        throw std::invalid_argument("PhaseConfig: phase map must cover all 2^n phases");
    bool anyMaterial = false;
    for (int m : phaseToMaterial) {
        if (m == kVoidMaterial) continue;
        if (m < 0 || m >= static_cast<int>(materials.size()))
            throw std::invalid_argument("PhaseConfig: phase mapped to unknown material");
        anyMaterial = true;
    }
    if (!anyMaterial)
        throw std::invalid_argument("PhaseConfig: at least one phase must carry a material");
}

int phaseAt(std::span<const LevelSetField> fields, Vec2 x) {
    int phase = 0;
    for (size_t j = 0; j < fields.size(); ++j)
        if (fields[j].value(x) >= fields[j].isoLevel()) phase |= 1 << j;
    return phase;
}

}  // namespace imig
