#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "imig/spline.hpp"

namespace imig {

/// Set of cells on one level's Cartesian grid, with a summed-area table
/// for O(1) box containment queries.
struct CellSet {
    int nx = 0, ny = 0;
    std::vector<uint8_t> mask;
    std::vector<int> prefix;

    static CellSet all(int nx, int ny);
    static CellSet none(int nx, int ny);

    bool get(int cx, int cy) const { return mask[cy * nx + cx] != 0; }
    void set(int cx, int cy, bool v = true) { mask[cy * nx + cx] = v ? 1 : 0; }
    int count() const;
    bool empty() const { return count() == 0; }

    /// Call after editing the mask and before box queries.
    void finalize();

    /// Number of set cells in the inclusive box [x0,x1] x [y0,y1].
    int countBox(int x0, int y0, int x1, int y1) const;
    bool containsBox(int x0, int y0, int x1, int y1) const {
        return countBox(x0, y0, x1, y1) == (x1 - x0 + 1) * (y1 - y0 + 1);
    }
};

CellSet dilate(const CellSet& s, int ring);
CellSet childrenOf(const CellSet& parents);

inline constexpr int kMaxDepth = 5;

/// Nested sequence of dyadically refined spline spaces with per-level
/// refinement subdomains Omega^l (level 0 covers the whole grid).
struct LevelSequence {
    std::vector<TensorBSplineSpace> spaces;
    std::vector<RefinementCoefficients> refinements;  // l -> l+1
    std::vector<CellSet> subdomains;

    int depth() const { return static_cast<int>(spaces.size()); }
    const TensorBSplineSpace& space(int l) const { return spaces[l]; }
};

/// Validates nesting (throws std::invalid_argument otherwise) and refines
/// the base space once per extra subdomain level.
LevelSequence makeLevelSequence(const TensorBSplineSpace& level0,
                                std::vector<CellSet> subdomains);

/// Nested subdomain series from a cell marker: at each level the marked
/// cells of the current subdomain are dilated by `ring` cells and their
/// children form the next subdomain.
std::vector<CellSet> buildNestedSubdomains(
    const TensorBSplineSpace& level0, int depth, int ring,
    const std::function<bool(int level, const std::array<double, 4>& cellBox)>& marker);

/// Hierarchically refined mesh (Eq.-(7)-style membership): cell active at
/// level l iff it lies in Omega^l and not in Omega^{l+1}.
class HierMesh {
public:
    struct Cell {
        int level;
        int flatIndex;
        int parent;  // active-cell id at construction order, -1 for level 0
    };

    HierMesh() = default;

    int numCells() const { return static_cast<int>(cells_.size()); }
    const Cell& cell(int id) const { return cells_[id]; }
    const std::vector<Cell>& cells() const { return cells_; }

    std::array<double, 4> cellBox(int id) const;
    Vec2 cellCenter(int id) const;
    double cellSpacing(int id) const;

    /// Active cell containing x (finest level whose subdomain contains x).
    int locate(Vec2 x) const;

    /// Active-cell id of (level, flat), -1 if that cell is not active.
    int activeId(int level, int flat) const;

    const LevelSequence& sequence() const { return seq_; }
    int depth() const { return seq_.depth(); }

    friend HierMesh activeMesh(LevelSequence seq);

private:
    LevelSequence seq_;
    std::vector<Cell> cells_;
    std::vector<std::vector<int>> idByLevel_;  // level -> flat -> active id
};

HierMesh activeMesh(LevelSequence seq);

/// Truncated (or plain) hierarchical B-spline space. Active functions are
/// stored with their multi-level coefficient representation so evaluation
/// at a point only needs the finest active level there.
class HierarchicalSpace {
public:
    struct Function {
        int level;
        int flat;
    };

    int numFunctions() const { return static_cast<int>(functions_.size()); }
    const Function& function(int id) const { return functions_[id]; }
    bool truncated() const { return truncated_; }
    const LevelSequence& sequence() const { return mesh_.sequence(); }
    const HierMesh& mesh() const { return mesh_; }

    /// All active functions with nonzero value at x: (function id, value).
    /// Throws std::domain_error outside the domain.
    std::vector<std::pair<int, double>> evalBasis(Vec2 x) const;
    std::vector<std::pair<int, Vec2>> evalGradients(Vec2 x) const;

    /// Greville point of the function at its own level.
    Vec2 grevillePoint(int id) const;

    /// Support box of the function's untruncated parent B-spline, expressed
    /// as inclusive cell bounds on `level` (level >= function's own level).
    std::array<int, 4> supportCellsAtLevel(int id, int level) const;

    /// Representation of function id over level l fine functions
    /// (empty when l < function level).
    const std::vector<std::pair<int, double>>& representation(int id, int l) const;

    friend HierarchicalSpace buildHierarchical(LevelSequence seq, bool truncate);

private:
    bool truncated_ = true;
    HierMesh mesh_;
    std::vector<Function> functions_;
    // reps_[id][l] = coefficients over level-l basis (l >= function level)
    std::vector<std::vector<std::vector<std::pair<int, double>>>> reps_;
    // transpose_[l][fineFlat] = list of (function id, coefficient)
    std::vector<std::vector<std::vector<std::pair<int, double>>>> transpose_;
};

/// Eq.-(9)-style construction: keep-and-truncate coarse functions whose
/// support is not contained in the next subdomain, activate fine ones
/// whose support is.
HierarchicalSpace buildThb(LevelSequence seq);

/// Same active set without truncation (violates partition of unity on
/// refined configurations; kept for contrast tests).
HierarchicalSpace buildHb(LevelSequence seq);

}  // namespace imig
