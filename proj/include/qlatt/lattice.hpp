#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qlatt {

/// Periodic 2D square lattice of qubits with deduplicated
/// nearest-neighbor bonds. Sites are numbered row-major.
struct LatticeSpec {
    int rows = 0;
    int cols = 0;
    int n = 0;
    std::vector<std::pair<int, int>> bonds; // unordered pairs, first < second
    bool wraparound_duplicates = false;     // true for 2-wide lattices

    int site(int r, int c) const { return r * cols + c; }
};

/// Nearest-neighbor bonds under periodic boundary conditions,
/// emitted in row-major site order (right bond, then down bond).
/// Wraparound duplicates on 2-wide lattices collapse to one bond.
inline LatticeSpec build_lattice(int rows, int cols) {
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("build_lattice: rows and cols must be >= 2");

    LatticeSpec lat;
    lat.rows = rows;
    lat.cols = cols;
    lat.n = rows * cols;

    std::set<std::pair<int, int>> seen;
    auto add = [&](int a, int b) {
        if (a == b) return;
        auto key = std::minmax(a, b);
        if (seen.insert(key).second)
            lat.bonds.push_back(key);
        else
            lat.wraparound_duplicates = true;
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int s = lat.site(r, c);
            add(s, lat.site(r, (c + 1) % cols));
            add(s, lat.site((r + 1) % rows, c));
        }
    }
    return lat;
}

} // namespace qlatt
