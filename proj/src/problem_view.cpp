#include "layerplace/problem_view.hpp"

#include <algorithm>
#include <map>

namespace layerplace {

ProblemView ProblemView::build(const PlacementProblem& problem) {
    ProblemView v;
    v.units = problem.topology.unit_indices();
    const auto sinks = problem.topology.sink_indices();
    v.sink = sinks.empty() ? -1 : sinks.front();

    v.source_of_cnn.reserve(problem.cnns.size());
    for (const auto& entry : problem.cnns) {
        v.source_of_cnn.push_back(problem.topology.index_of(entry.source_id));
    }

    v.device.assign(static_cast<std::size_t>(problem.topology.size()), nullptr);
    for (int i : v.units) {
        auto it = problem.unit_classes.find(problem.topology.vertex(i).id);
        if (it != problem.unit_classes.end()) {
            v.device[static_cast<std::size_t>(i)] = &it->second;
        }
    }

    // Entity layout: sharing groups collapse to one entity each, everything
    // else is per-layer. Order is first appearance scanning cnn-major.
    std::map<std::pair<int, int>, int> group_of; // (cnn, layer) -> sharing group
    for (std::size_t gi = 0; gi < problem.sharing.size(); ++gi) {
        for (const LayerRef& m : problem.sharing[gi].members) {
            group_of[{m.cnn, m.layer}] = static_cast<int>(gi);
        }
    }

    std::vector<int> entity_of_group(problem.sharing.size(), -1);
    v.entity_of.resize(problem.cnns.size());
    for (int u = 0; u < static_cast<int>(problem.cnns.size()); ++u) {
        const CnnSpec& cnn = problem.cnn(u);
        v.entity_of[static_cast<std::size_t>(u)].assign(
            static_cast<std::size_t>(cnn.depth()), -1);
        for (int j = 0; j < cnn.depth(); ++j) {
            auto git = group_of.find({u, j});
            if (git == group_of.end()) {
                PlacementEntity e;
                e.members = {{u, j}};
                e.memory_kb = cnn.layers[static_cast<std::size_t>(j)].memory_kb;
                e.compute_mmul = cnn.layers[static_cast<std::size_t>(j)].compute_mmul;
                v.entity_of[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)] =
                    static_cast<int>(v.entities.size());
                v.entities.push_back(std::move(e));
                continue;
            }
            const int gi = git->second;
            if (entity_of_group[static_cast<std::size_t>(gi)] < 0) {
                PlacementEntity e;
                e.members = problem.sharing[static_cast<std::size_t>(gi)].members;
                std::sort(e.members.begin(), e.members.end());
                const LayerRef& head = e.members.front();
                const LayerSpec& spec =
                    problem.cnn(head.cnn).layers[static_cast<std::size_t>(head.layer)];
                e.memory_kb = spec.memory_kb;
                e.compute_mmul = spec.compute_mmul;
                entity_of_group[static_cast<std::size_t>(gi)] =
                    static_cast<int>(v.entities.size());
                v.entities.push_back(std::move(e));
            }
            v.entity_of[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)] =
                entity_of_group[static_cast<std::size_t>(gi)];
        }
    }
    return v;
}

} // namespace layerplace
