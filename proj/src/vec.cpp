#include "hjhopf/vec.hpp"

namespace hjhopf {

std::vector<Vec> tensor_grid(const Box& box, int per_axis) {
    const int n = box.dim();
    std::vector<std::vector<double>> axes;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        axes.push_back(linspace(box.lo[i], box.hi[i], per_axis));
        total *= static_cast<std::size_t>(per_axis);
    }
    std::vector<Vec> out;
    out.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        Vec p(n);
        std::size_t rest = k;
        for (int i = 0; i < n; ++i) {
            p[i] = axes[static_cast<std::size_t>(i)][rest % static_cast<std::size_t>(per_axis)];
            rest /= static_cast<std::size_t>(per_axis);
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace hjhopf
