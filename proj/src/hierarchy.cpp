#include "imig/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace imig {

CellSet CellSet::all(int nx, int ny) {
    CellSet s;
    s.nx = nx;
    s.ny = ny;
    s.mask.assign(static_cast<size_t>(nx) * ny, 1);
    s.finalize();
    return s;
}

CellSet CellSet::none(int nx, int ny) {
    CellSet s;
    s.nx = nx;
    s.ny = ny;
    s.mask.assign(static_cast<size_t>(nx) * ny, 0);
    s.finalize();
    return s;
}

int CellSet::count() const {
    int c = 0;
    for (uint8_t v : mask) c += v;
    return c;
}

void CellSet::finalize() {
    prefix.assign(static_cast<size_t>(nx + 1) * (ny + 1), 0);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x)
            prefix[(y + 1) * (nx + 1) + (x + 1)] = mask[y * nx + x] +
                                                   prefix[y * (nx + 1) + (x + 1)] +
                                                   prefix[(y + 1) * (nx + 1) + x] -
                                                   prefix[y * (nx + 1) + x];
}

int CellSet::countBox(int x0, int y0, int x1, int y1) const {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, nx - 1);
    y1 = std::min(y1, ny - 1);
    if (x0 > x1 || y0 > y1) return 0;
    return prefix[(y1 + 1) * (nx + 1) + (x1 + 1)] - prefix[y0 * (nx + 1) + (x1 + 1)] -
           prefix[(y1 + 1) * (nx + 1) + x0] + prefix[y0 * (nx + 1) + x0];
}

CellSet dilate(const CellSet& s, int ring) {
    if (ring <= 0) return s;
    CellSet out = CellSet::none(s.nx, s.ny);
    for (int y = 0; y < s.ny; ++y)
        for (int x = 0; x < s.nx; ++x)
            if (s.countBox(x - ring, y - ring, x + ring, y + ring) > 0) out.set(x, y);
    out.finalize();
    return out;
}

CellSet childrenOf(const CellSet& parents) {
    CellSet out = CellSet::none(parents.nx * 2, parents.ny * 2);
    for (int y = 0; y < parents.ny; ++y)
        for (int x = 0; x < parents.nx; ++x)
            if (parents.get(x, y)) {
                out.set(2 * x, 2 * y);
                out.set(2 * x + 1, 2 * y);
                out.set(2 * x, 2 * y + 1);
                out.set(2 * x + 1, 2 * y + 1);
            }
    out.finalize();
    return out;
}

LevelSequence makeLevelSequence(const TensorBSplineSpace& level0,
                                std::vector<CellSet> subdomains) {
    const int depth = static_cast<int>(subdomains.size());
    if (depth < 1) throw std::invalid_argument("LevelSequence: need at least one level");
    if (depth > kMaxDepth)
        throw std::invalid_argument("LevelSequence: refinement depth exceeds " +
                                    std::to_string(kMaxDepth));
    LevelSequence seq;
    seq.spaces.push_back(level0);
    for (int l = 1; l < depth; ++l) {
        auto [fine, rc] = dyadicRefine(seq.spaces.back());
        seq.spaces.push_back(fine);
        seq.refinements.push_back(std::move(rc));
    }
    // validate: dimensions, level-0 coverage, nesting, whole-parent children
    for (int l = 0; l < depth; ++l) {
        const auto& s = seq.spaces[l];
        if (subdomains[l].nx != s.numCells(0) || subdomains[l].ny != s.numCells(1))
            throw std::invalid_argument("LevelSequence: subdomain grid mismatch at level " +
                                        std::to_string(l));
    }
    if (subdomains[0].count() != subdomains[0].nx * subdomains[0].ny)
        throw std::invalid_argument("LevelSequence: Omega^0 must cover the whole grid");
    for (int l = 1; l < depth; ++l) {
        const auto& fine = subdomains[l];
        const auto& coarse = subdomains[l - 1];
        for (int y = 0; y < coarse.ny; ++y)
            for (int x = 0; x < coarse.nx; ++x) {
                const int nChildren = fine.countBox(2 * x, 2 * y, 2 * x + 1, 2 * y + 1);
                if (nChildren > 0 && !coarse.get(x, y))
                    throw std::invalid_argument(
                        "LevelSequence: subdomains not nested at level " + std::to_string(l));
                if (nChildren != 0 && nChildren != 4)
                    throw std::invalid_argument(
                        "LevelSequence: Omega^" + std::to_string(l) +
                        " splits a level-" + std::to_string(l - 1) + " cell");
            }
    }
    seq.subdomains = std::move(subdomains);
    return seq;
}

std::vector<CellSet> buildNestedSubdomains(
    const TensorBSplineSpace& level0, int depth, int ring,
    const std::function<bool(int, const std::array<double, 4>&)>& marker) {
    std::vector<CellSet> out;
    out.push_back(CellSet::all(level0.numCells(0), level0.numCells(1)));
    const Vec2 o = level0.origin();
    const Vec2 h0 = level0.spacing();
    for (int l = 0; l + 1 < depth; ++l) {
        const auto& omega = out[l];
        CellSet marked = CellSet::none(omega.nx, omega.ny);
        const double hx = h0[0] / (1 << l), hy = h0[1] / (1 << l);
        for (int y = 0; y < omega.ny; ++y)
            for (int x = 0; x < omega.nx; ++x) {
                if (!omega.get(x, y)) continue;
                const std::array<double, 4> box{o[0] + x * hx, o[1] + y * hy,
                                                o[0] + (x + 1) * hx, o[1] + (y + 1) * hy};
                if (marker(l, box)) marked.set(x, y);
            }
        marked.finalize();
        CellSet grown = dilate(marked, ring);
        // stay inside the current subdomain so the sequence nests
        for (int i = 0; i < grown.nx * grown.ny; ++i)
            grown.mask[i] = grown.mask[i] && omega.mask[i];
        grown.finalize();
        out.push_back(childrenOf(grown));
    }
    return out;
}

std::array<double, 4> HierMesh::cellBox(int id) const {
    return seq_.space(cells_[id].level).cellBox(cells_[id].flatIndex);
}

Vec2 HierMesh::cellCenter(int id) const {
    return seq_.space(cells_[id].level).cellCenter(cells_[id].flatIndex);
}

double HierMesh::cellSpacing(int id) const {
    return seq_.space(cells_[id].level).spacing()[0];
}

int HierMesh::activeId(int level, int flat) const {
    if (level < 0 || level >= static_cast<int>(idByLevel_.size())) return -1;
    return idByLevel_[level][flat];
}

int HierMesh::locate(Vec2 x) const {
    int level = 0;
    int flat = seq_.space(0).cellAt(x);
    while (level + 1 < seq_.depth()) {
        const int fine = seq_.space(level + 1).cellAt(x);
        const auto [fx, fy] = seq_.space(level + 1).cellMulti(fine);
        if (!seq_.subdomains[level + 1].get(fx, fy)) break;
        ++level;
        flat = fine;
    }
    const int id = idByLevel_[level][flat];
    if (id < 0) throw std::domain_error("HierMesh::locate: point not in an active cell");
    return id;
}

HierMesh activeMesh(LevelSequence seq) {
    HierMesh mesh;
    mesh.seq_ = std::move(seq);
    const auto& s = mesh.seq_;
    mesh.idByLevel_.resize(s.depth());
    for (int l = 0; l < s.depth(); ++l)
        mesh.idByLevel_[l].assign(s.space(l).numCells(), -1);
    for (int l = 0; l < s.depth(); ++l) {
        const auto& omega = s.subdomains[l];
        for (int y = 0; y < omega.ny; ++y)
            for (int x = 0; x < omega.nx; ++x) {
                if (!omega.get(x, y)) continue;
                const bool refined = l + 1 < s.depth() &&
                                     s.subdomains[l + 1].get(2 * x, 2 * y);
                if (refined) continue;
                const int flat = s.space(l).cellIndex(x, y);
                int parent = -1;
                if (l > 0) parent = mesh.idByLevel_[l - 1][s.space(l - 1).cellIndex(x / 2, y / 2)];
                mesh.idByLevel_[l][flat] = static_cast<int>(mesh.cells_.size());
                mesh.cells_.push_back({l, flat, parent});
            }
    }
    return mesh;
}

namespace {

// inclusive support box of function `flat` of `space`, expressed on `level`
// (level >= own), given ownLevel
std::array<int, 4> scaledSupport(const TensorBSplineSpace& space, int flat, int ownLevel,
                                 int level) {
    auto box = space.supportCells(flat);
    const int shift = level - ownLevel;
    return {box[0] << shift, box[1] << shift, ((box[2] + 1) << shift) - 1,
            ((box[3] + 1) << shift) - 1};
}

}  // namespace

HierarchicalSpace buildHierarchical(LevelSequence seq, bool truncate) {
    HierarchicalSpace sp;
    sp.truncated_ = truncate;
    sp.mesh_ = activeMesh(std::move(seq));
    const LevelSequence& s = sp.mesh_.sequence();
    const int depth = s.depth();

    struct Entry {
        int level;
        int flat;
        std::vector<std::vector<std::pair<int, double>>> reps;  // indexed by level
    };
    std::vector<Entry> active;
    active.reserve(s.space(0).numFunctions());
    for (int i = 0; i < s.space(0).numFunctions(); ++i) {
        Entry e{0, i, {}};
        e.reps.resize(depth);
        e.reps[0] = {{i, 1.0}};
        active.push_back(std::move(e));
    }

    for (int l = 0; l + 1 < depth; ++l) {
        const auto& fineSpace = s.space(l + 1);
        const auto& omega = s.subdomains[l + 1];
        // fine functions activated at level l+1
        std::vector<uint8_t> fineContained(fineSpace.numFunctions(), 0);
        for (int j = 0; j < fineSpace.numFunctions(); ++j) {
            const auto b = fineSpace.supportCells(j);
            fineContained[j] = omega.containsBox(b[0], b[1], b[2], b[3]) ? 1 : 0;
        }
        std::vector<Entry> next;
        next.reserve(active.size());
        for (auto& e : active) {
            const auto b = scaledSupport(s.space(e.level), e.flat, e.level, l + 1);
            if (omega.containsBox(b[0], b[1], b[2], b[3])) continue;  // replaced by fines
            // extend representation one level down
            std::unordered_map<int, double> acc;
            for (const auto& [cj, cc] : e.reps[l])
                for (const auto& [fj, fc] :
                     s.refinements[l].tensorRow(s.space(l), fineSpace, cj))
                    acc[fj] += cc * fc;
            auto& rep = e.reps[l + 1];
            rep.reserve(acc.size());
            for (const auto& [fj, fc] : acc) {
                if (truncate && fineContained[fj]) continue;  // truncation zeroes these
                if (fc != 0.0) rep.emplace_back(fj, fc);
            }
            std::sort(rep.begin(), rep.end());
            next.push_back(std::move(e));
        }
        for (int j = 0; j < fineSpace.numFunctions(); ++j) {
            if (!fineContained[j]) continue;
            Entry e{l + 1, j, {}};
            e.reps.resize(depth);
            e.reps[l + 1] = {{j, 1.0}};
            next.push_back(std::move(e));
        }
        active = std::move(next);
    }

    std::sort(active.begin(), active.end(), [](const Entry& a, const Entry& b) {
        return a.level != b.level ? a.level < b.level : a.flat < b.flat;
    });

    sp.functions_.reserve(active.size());
    sp.reps_.reserve(active.size());
    for (auto& e : active) {
        sp.functions_.push_back({e.level, e.flat});
        sp.reps_.push_back(std::move(e.reps));
    }
    sp.transpose_.resize(depth);
    for (int l = 0; l < depth; ++l)
        sp.transpose_[l].resize(s.space(l).numFunctions());
    for (int id = 0; id < sp.numFunctions(); ++id)
        for (int l = sp.functions_[id].level; l < depth; ++l)
            for (const auto& [j, c] : sp.reps_[id][l])
                sp.transpose_[l][j].emplace_back(id, c);
    return sp;
}

HierarchicalSpace buildThb(LevelSequence seq) { return buildHierarchical(std::move(seq), true); }
HierarchicalSpace buildHb(LevelSequence seq) { return buildHierarchical(std::move(seq), false); }

std::vector<std::pair<int, double>> HierarchicalSpace::evalBasis(Vec2 x) const {
    const int cellId = mesh_.locate(x);
    const int level = mesh_.cell(cellId).level;
    const auto vals = sequence().space(level).evalBasis(x);
    std::vector<std::pair<int, double>> out;
    for (int k = 0; k < vals.count; ++k) {
        if (vals.value[k] == 0.0) continue;
        for (const auto& [id, c] : transpose_[level][vals.index[k]])
            out.emplace_back(id, c * vals.value[k]);
    }
    std::sort(out.begin(), out.end());
    // combine duplicates
    size_t w = 0;
    for (size_t r = 0; r < out.size(); ++r) {
        if (w > 0 && out[w - 1].first == out[r].first)
            out[w - 1].second += out[r].second;
        else
            out[w++] = out[r];
    }
    out.resize(w);
    return out;
}

std::vector<std::pair<int, Vec2>> HierarchicalSpace::evalGradients(Vec2 x) const {
    const int cellId = mesh_.locate(x);
    const int level = mesh_.cell(cellId).level;
    const auto g = sequence().space(level).evalGradients(x);
    std::vector<std::pair<int, Vec2>> out;
    for (int k = 0; k < g.count; ++k) {
        for (const auto& [id, c] : transpose_[level][g.index[k]])
            out.emplace_back(id, Vec2(c * g.gradient[k]));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t w = 0;
    for (size_t r = 0; r < out.size(); ++r) {
        if (w > 0 && out[w - 1].first == out[r].first)
            out[w - 1].second += out[r].second;
        else
            out[w++] = out[r];
    }
    out.resize(w);
    return out;
}

Vec2 HierarchicalSpace::grevillePoint(int id) const {
    const auto& f = functions_[id];
    return sequence().space(f.level).grevillePoint(f.flat);
}

std::array<int, 4> HierarchicalSpace::supportCellsAtLevel(int id, int level) const {
    const auto& f = functions_[id];
    return scaledSupport(sequence().space(f.level), f.flat, f.level, level);
}

const std::vector<std::pair<int, double>>& HierarchicalSpace::representation(int id,
                                                                             int l) const {
    return reps_[id][l];
}

}  // namespace imig
