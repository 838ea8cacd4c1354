#pragma once

#include <string>

#include "gevlab/config.hpp"

#ifndef GEVLAB_CONFIG_DIR
#define GEVLAB_CONFIG_DIR "configs"
#endif

namespace testing {

inline const gevlab::RunConfig& reference_config() {
    static const gevlab::RunConfig cfg =
        gevlab::load_config(std::string(GEVLAB_CONFIG_DIR) + "/reference.json");
    return cfg;
}

// Small problem used by the geometry examples: k=2, s1=s2=1, r1=0, r2=3.
inline gevlab::ProblemParams small_params() {
    gevlab::ProblemParams p;
    p.k = 2;
    p.s1 = 1;
    p.s2 = 1;
    p.r1 = 0;
    p.r2 = 3;
    p.S = 1;
    return p;
}

}  // namespace testing
