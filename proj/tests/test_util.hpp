#pragma once

// Shared helpers for the test binaries: seeded random formula generators
// used by the logic tests and the acceptance checks.

#include <vector>

#include "fl/forest.hpp"
#include "fl/logic.hpp"

namespace fl::testutil {

inline TreeFormulaPtr random_tree_formula(SplitMix64& rng, const Alphabet& sigma, int depth,
                                          bool allow_af);

inline ForestFormulaPtr random_forest_formula(SplitMix64& rng, const Alphabet& sigma, int depth,
                                              bool allow_af) {
    const std::uint64_t pick = rng.next_below(depth <= 0 ? 3 : 8);
    switch (pick) {
        case 0:
            return ff_top();
        case 1:
            return ff_bot();
        case 2: {
            auto arg = random_tree_formula(rng, sigma, depth - 1, allow_af);
            if (allow_af && rng.next_below(2) == 0) return ff_af(arg);
            return ff_ef(arg);
        }
        case 3:
        case 4:
            return ff_not(random_forest_formula(rng, sigma, depth - 1, allow_af));
        case 5:
            return ff_and(random_forest_formula(rng, sigma, depth - 1, allow_af),
                          random_forest_formula(rng, sigma, depth - 1, allow_af));
        case 6:
            return ff_or(random_forest_formula(rng, sigma, depth - 1, allow_af),
                         random_forest_formula(rng, sigma, depth - 1, allow_af));
        default: {
            auto arg = random_tree_formula(rng, sigma, depth - 1, allow_af);
            if (allow_af && rng.next_below(2) == 0) return ff_af(arg);
            return ff_ef(arg);
        }
    }
}

inline TreeFormulaPtr random_tree_formula(SplitMix64& rng, const Alphabet& sigma, int depth,
                                          bool allow_af) {
    const std::uint64_t pick = rng.next_below(depth <= 0 ? 1 : 7);
    switch (pick) {
        case 0:
            return tf_letter(static_cast<int>(rng.next_below(sigma.size())));
        case 1:
        case 2:
            return tf_not(random_tree_formula(rng, sigma, depth - 1, allow_af));
        case 3:
            return tf_and(random_tree_formula(rng, sigma, depth - 1, allow_af),
                          random_tree_formula(rng, sigma, depth - 1, allow_af));
        case 4:
            return tf_or(random_tree_formula(rng, sigma, depth - 1, allow_af),
                         random_tree_formula(rng, sigma, depth - 1, allow_af));
        default:
            return tf_embedded(random_forest_formula(rng, sigma, depth - 1, allow_af));
    }
}

}  // namespace fl::testutil
