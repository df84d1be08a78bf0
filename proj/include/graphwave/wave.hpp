// Standing-wave record shared by the construction and solver paths.
#pragma once

#include <string>

#include "graphwave/calculus.hpp"
#include "graphwave/grid.hpp"

namespace graphwave {

enum class WaveOrigin {
    PeriodFunction,
    Elliptic,
    Newton,
    DtnSeeded,
};

inline const char* to_string(WaveOrigin o)
{
    switch (o) {
    case WaveOrigin::PeriodFunction: return "period-function";
    case WaveOrigin::Elliptic: return "elliptic";
    case WaveOrigin::Newton: return "newton";
    case WaveOrigin::DtnSeeded: return "dtn-seeded";
    }
    return "unknown";
}

struct StandingWave {
    double omega = 0.0;
    double power = 1.0;
    RealGraphFunction profile;
    double mass = 0.0;
    double energy = 0.0;
    double residual = 0.0; // sup-norm of the discrete stationary residual
    WaveOrigin origin = WaveOrigin::Newton;

    void refresh_functionals()
    {
        mass = graphwave::mass(profile);
        energy = graphwave::energy(profile, power);
    }
};

} // namespace graphwave
