#pragma once

namespace reslab {

/// Observed and fitted response of one likelihood cell (cohort k, age j).
struct FittedCell {
    int k = 0;
    int j = 0;
    double observed = 0.0;
    double fitted = 0.0;
};

}  // namespace reslab
