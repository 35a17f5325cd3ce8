#include "hyperslice/rng.hpp"

#include <cmath>

#include "hyperslice/errors.hpp"

namespace hyperslice {

double SeededRng::standard_normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

Vector sample_unit_sphere(SeededRng& rng, std::size_t n)
{
    if (n == 0) throw InvalidInput("sphere dimension must be positive");
    Vector x(n);
    while (true) {
        for (double& c : x) c = rng.standard_normal();
        const double r = norm(x);
        if (r > 0.0) {
            for (double& c : x) c /= r;
            return x;
        }
    }
}

}  // namespace hyperslice
