#pragma once

#include <cstddef>

namespace stt {

/// Which face of an obstacle projection the detour uses: Lower places the
/// tube's lower bound above the obstacle, Upper places the tube's upper
/// bound below it.
enum class Side { Lower, Upper };

const char* to_string(Side side);

/// Avoidance schedule for one unsafe set.
struct ObstaclePlan {
    std::size_t obstacle = 0;
    bool empty = true;
    double t_in = 0.0;   // first instant the nominal band meets the obstacle
    double t_out = 0.0;  // last such instant
    double t1 = 0.0;     // t_in - Delta
    double t2 = 0.0;     // t_out + Delta
    std::size_t dim = 0;
    Side side = Side::Lower;
    double psi = 0.0;         // held lower-bound level in `dim`
    double rho_at_t1 = 0.0;   // nominal lower bound in `dim` at t1
    double rho_at_t2 = 0.0;   // nominal lower bound in `dim` at t2
};

}  // namespace stt
