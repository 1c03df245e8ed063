#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "sobolab/lab.hpp"

namespace sobolab::lab::detail {

Outcome run_trace_norm(const Json& config);
Outcome run_extension(const Json& config);
Outcome run_recover_density(const Json& config);
Outcome run_bvp(const Json& config);
Outcome run_conormal(const Json& config);
Outcome run_green(const Json& config);
Outcome run_commutator(const Json& config);
Outcome run_product_bound(const Json& config);
Outcome run_apriori(const Json& config);
Outcome run_regularity(const Json& config);
Outcome run_appendix(const Json& config);

/// %.6g
inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// JSON-safe number: non-finite values become strings.
inline Json jnum(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace sobolab::lab::detail
