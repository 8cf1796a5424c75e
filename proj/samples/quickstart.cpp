// Copyright 2026 The udalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Builds the 5d-7 observables for a qutrit-sized example, checks a random
// pure state against them, then shows the three-observable qutrit set where
// a pure state is unique among pure states but not among mixed ones.

#include <iostream>

#include "udalab/udalab.hpp"

int main() {
    using namespace udalab;

    const std::size_t d = 5;
    const auto a = uda_observables(d);
    std::cout << "d = " << d << ": " << a.size() << " observables\n";

    const auto psi = random_pure(d, 7);
    FeasibilityConfig cfg;
    cfg.restarts = 5;
    const auto falsifier = uda_falsify(psi, a, cfg);
    std::cout << "random state, projection search: " << to_string(falsifier.verdict) << " (" << falsifier.evidence << ")\n";
    std::cout << "random state, uda_certify: " << to_string(uda_certify(psi, a, cfg).verdict) << "\n";

    const auto q = qutrit_counterexample(100, 0, cfg);
    std::cout << "qutrit |2>: pure search " << to_string(q.udp.verdict) << ", mixed search " << to_string(q.uda.verdict)
              << "\n";
    return 0;
}
