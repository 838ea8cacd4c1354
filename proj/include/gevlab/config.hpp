#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gevlab/asymptotics.hpp"
#include "gevlab/solver.hpp"

namespace gevlab {

struct CoeffsSpec {
    std::vector<int> sectors{0};
    std::vector<double> eps_moduli{0.1};
    double t_abs_max = 2.0;  // the radial grid reaches the Laplace cutoff for this |t|
};

struct SolveSpec {
    int sector = 0;
    std::vector<double> eps_moduli{0.1};
    double t_min = 0.5;
    double t_max = 1.6;
    double t_arg = 0.0;
    double h = 0.0025;        // finest log step of the t line
    int z_points = 4;
    double z_factor = 0.25;   // |z| = z_factor / Z0
};

struct RunConfig {
    ProblemParams problem;
    GeometryConfig geometry;
    std::vector<InitialDatum> initial;
    SolverOptions solver;
    ResidualOptions residual;
    CoeffsSpec coeffs;
    SolveSpec solve;
    CampaignSpec campaign;
    std::uint64_t seed = 1;
};

// Throws PARSE with the dotted path of the offending field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json complex_to_json(cplx c);

}  // namespace gevlab
