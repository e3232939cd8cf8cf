#pragma once

#include <random>
#include <string>
#include <vector>

#include "evoforge/action.hpp"
#include "evoforge/judgment.hpp"

namespace evoforge::testing {

// Uniformly random valid action over all kinds and payload families.
inline Action random_action(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind_dist(0, kActionTypeCount - 1);
    std::uniform_int_distribution<int> coord(0, 1999);
    std::uniform_int_distribution<int> len(0, 12);
    std::uniform_int_distribution<int> ch(32, 126);
    auto rand_text = [&] {
        std::string s;
        int n = len(rng);
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>(ch(rng)));
        return s;
    };
    while (true) {
        auto kind = static_cast<ActionType>(kind_dist(rng));
        switch (reward_family(kind)) {
            case RewardFamily::point:
                return Action::point_action(kind, {coord(rng), coord(rng)});
            case RewardFamily::box: {
                int x1 = coord(rng), y1 = coord(rng), x2 = coord(rng), y2 = coord(rng);
                if (x1 > x2) std::swap(x1, x2);
                if (y1 > y2) std::swap(y1, y2);
                return Action::box_action(kind, {x1, y1, x2, y2});
            }
            case RewardFamily::text:
                if (kind == ActionType::hotkey || kind == ActionType::press)
                    return Action::keys_action(kind, rand_text());
                return Action::text_action(kind, rand_text());
            case RewardFamily::direction:
                return Action::scroll_action(
                    static_cast<ScrollDirection>(coord(rng) % 4));
            case RewardFamily::fixed:
                return Action::simple(kind);
        }
    }
}

inline StateObservation simple_observation(const std::string& screen_id,
                                           std::vector<WidgetInfo> widgets = {}) {
    StateObservation obs;
    obs.screen_id = screen_id;
    obs.widgets = std::move(widgets);
    obs.caption = "screen '" + screen_id + "'.";
    return obs;
}

}  // namespace evoforge::testing
