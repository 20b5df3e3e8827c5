// suites.hpp — property suites shared by the CLI `check` command and the acceptance binary

#pragma once

#include "vnalg/scene.hpp"

#include <string>
#include <vector>

namespace vnalg::suites {

struct check {
    std::string name;
    bool pass = false;
    double value = 0;       // worst residual, or a count
    double threshold = 0;
    std::string detail;
    bool known_red = false; // the stated target is not attainable; see the README
};

struct suite_result {
    std::string name;
    std::string title;
    std::vector<check> checks;
    double seconds = 0;

    int passed() const;
    int failed() const;
    bool pass() const { return failed() == 0; }
};

struct options {
    std::uint64_t seed = 20240607;
    double tol = 0;                         // 0: the per-check default thresholds
    double trials = 1.0;                    // multiplier on the number of random trials
    std::string data_dir;                   // bundled data (diagram corpus)
    const scene::scene* sc = nullptr;       // scene-driven mode where supported
};

// inner_product, standard_form, fusion, zigzag, dimension, index, extremality, l2, fusion_functor,
// inequalities, diagram — in acceptance order.
const std::vector<std::string>& suite_names();
std::string suite_title(const std::string& name);
suite_result run_suite(const std::string& name, const options& opt);  // UnknownSuite

} // namespace vnalg::suites
