#include "lns1d/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lns1d/errors.hpp"

namespace lns1d {
namespace {

void require_cells(std::span<const double> f, const Grid& grid, const char* what) {
    if (static_cast<int>(f.size()) != grid.cells()) {
        throw StructuralError(std::string(what) + ": expected " + std::to_string(grid.cells()) +
                              " cell values, got " + std::to_string(f.size()));
    }
}

void require_nodes(std::span<const double> f, const Grid& grid, const char* what) {
    if (static_cast<int>(f.size()) != grid.nodes()) {
        throw StructuralError(std::string(what) + ": expected " + std::to_string(grid.nodes()) +
                              " node values, got " + std::to_string(f.size()));
    }
}

} // namespace

double discrete_integral(std::span<const double> cells, const Grid& grid) {
    require_cells(cells, grid, "discrete_integral");
    double sum = 0.0;
    for (double f : cells) {
        sum += f;
    }
    return sum * grid.dx();
}

double node_integral(std::span<const double> nodes, const Grid& grid) {
    require_nodes(nodes, grid, "node_integral");
    double sum = 0.5 * (nodes.front() + nodes.back());
    for (std::size_t j = 1; j + 1 < nodes.size(); ++j) {
        sum += nodes[j];
    }
    return sum * grid.dx();
}

double node_inner(std::span<const double> a, std::span<const double> b, const Grid& grid) {
    require_nodes(a, grid, "node_inner");
    require_nodes(b, grid, "node_inner");
    double sum = 0.0;
    for (int i = 0; i < grid.cells(); ++i) {
        sum += 2.0 * a[i] * b[i] + a[i] * b[i + 1] + a[i + 1] * b[i] + 2.0 * a[i + 1] * b[i + 1];
    }
    return sum * grid.dx() / 6.0;
}

double node_l2_squared(std::span<const double> nodes, const Grid& grid) {
    return node_inner(nodes, nodes, grid);
}

std::vector<double> mass_apply(std::span<const double> nodes, const Grid& grid) {
    require_nodes(nodes, grid, "mass_apply");
    const int n = grid.cells();
    const double h = grid.dx();
    std::vector<double> out(n + 1);
    out[0] = h * (nodes[0] / 3.0 + nodes[1] / 6.0);
    for (int j = 1; j < n; ++j) {
        out[j] = h * (nodes[j - 1] / 6.0 + 2.0 * nodes[j] / 3.0 + nodes[j + 1] / 6.0);
    }
    out[n] = h * (nodes[n - 1] / 6.0 + nodes[n] / 3.0);
    return out;
}

std::vector<double> cell_gradient(std::span<const double> nodes, const Grid& grid) {
    require_nodes(nodes, grid, "cell_gradient");
    std::vector<double> g(grid.cells());
    for (int i = 0; i < grid.cells(); ++i) {
        g[i] = (nodes[i + 1] - nodes[i]) / grid.dx();
    }
    return g;
}

std::vector<double> interior_node_gradient(std::span<const double> cells, const Grid& grid) {
    require_cells(cells, grid, "interior_node_gradient");
    std::vector<double> g(grid.cells() - 1);
    for (int j = 1; j < grid.cells(); ++j) {
        g[j - 1] = (cells[j] - cells[j - 1]) / grid.dx();
    }
    return g;
}

std::vector<double> cumulative_integral(std::span<const double> cells, const Grid& grid) {
    require_cells(cells, grid, "cumulative_integral");
    std::vector<double> c(grid.nodes());
    c[0] = 0.0;
    for (int i = 0; i < grid.cells(); ++i) {
        c[i + 1] = c[i] + cells[i] * grid.dx();
    }
    return c;
}

std::vector<double> cumulative_node_integral_to_centers(std::span<const double> nodes, const Grid& grid) {
    const auto weighted = mass_apply(nodes, grid);
    std::vector<double> c(grid.cells());
    double running = 0.0;
    for (int i = 0; i < grid.cells(); ++i) {
        running += weighted[i];
        c[i] = running;
    }
    return c;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double x : a) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw StructuralError("max_abs_diff: length mismatch");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

} // namespace lns1d
