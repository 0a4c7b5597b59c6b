#pragma once

// Built-in kernel families for desk-scale demonstrations: each family is a
// sequence n -> ChaosVector together with the target law it converges to,
// so acceptance runs need no hand-authored tensors.

#include <string>
#include <vector>

#include "chaoskit/target.hpp"

namespace ck {

struct Family {
    std::string name;
    std::string description;
    TargetSpec target;
    ChaosVector (*make)(int n);
};

// registered names:
//   fourth-moment          I_2 off-diagonal block kernels -> standard normal
//   chi-square             rank-one I_2 kernel plus decaying off-block -> chi^2_1 - 1
//   decaying-perturbation  exact mixed embedding plus vanishing extra block
//   stable-block           I_3 disjoint rank-one blocks, ||g_n (x)_2 g_n|| = n^{-1/2}
const Family& family(const std::string& name);  // throws std::invalid_argument
std::vector<std::string> family_names();

// convenience: the (n, F_n) sequence for the given n values
std::vector<std::pair<double, ChaosVector>> family_sequence(const std::string& name,
                                                            const std::vector<int>& ns);

}  // namespace ck
