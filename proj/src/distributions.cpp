#include "hfm/distributions.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace hfm::dist {

double student_t_two_sided(double t, double df) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    // P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    const double x = df / (df + t * t);
    return boost::math::ibeta(df / 2.0, 0.5, x);
}

double f_upper(double f, double df1, double df2) {
    if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    // P(F >= f) = I_{df2/(df2+df1 f)}(df2/2, df1/2)
    const double x = df2 / (df2 + df1 * f);
    return boost::math::ibeta(df2 / 2.0, df1 / 2.0, x);
}

double chi_square_upper(double x, double df) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double normal_two_sided(double z) {
    if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
    return boost::math::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace hfm::dist
