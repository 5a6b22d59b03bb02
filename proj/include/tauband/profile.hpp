#pragma once

#include <string>
#include <vector>

namespace tauband {

enum class ProfileKind { measured, predicted };

struct ProfilePoint {
    double y_over_P = 0.0;  // position along the full wetted perimeter, in [0,1]
    double tau = 0.0;       // shear stress [Pa]
};

struct ShearProfile {
    std::string sample_id;
    std::vector<ProfilePoint> points;
    ProfileKind kind = ProfileKind::measured;
};

}  // namespace tauband
