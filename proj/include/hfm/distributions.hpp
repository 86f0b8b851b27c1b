#pragma once

// Tail probabilities for the reference distributions used in inference.

namespace hfm::dist {

/// P(|T| >= |t|) for Student-t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// P(F >= f) for F(df1, df2).
double f_upper(double f, double df1, double df2);

/// P(X >= x) for chi-square with `df` degrees of freedom.
double chi_square_upper(double x, double df);

/// P(|Z| >= |z|) for the standard normal.
double normal_two_sided(double z);

}  // namespace hfm::dist
