#pragma once

#include <string>
#include <vector>

namespace hfm {

/// A predictive regression: response at t + d on regressors at t, intercept always included.
struct ModelCatalogEntry {
    std::string model_id;
    std::string response;
    std::vector<std::string> regressors;
    std::string description;
};

/**
 * Models 19-35, plus:
 *  - "21s", "24s", "26s", "27s": rkurt replaced by sqrt_rkurt,
 *  - "21b", "24b", "26b", "27b": bipower response with sqrt_rkurt,
 *  - "34L5", "35L5": five lags of rvar.
 */
const std::vector<ModelCatalogEntry>& model_catalog();

/// Throws std::invalid_argument for unknown ids.
const ModelCatalogEntry& find_model(const std::string& model_id);

/// Copy of `base` with a new response and every rkurt regressor replaced by `kurtosis_form`.
ModelCatalogEntry model_variant(const ModelCatalogEntry& base, const std::string& response,
                                const std::string& kurtosis_form);

/// Restricted / augmented pairs compared out of sample: (28,31), (29,32), (30,33), (34,35).
const std::vector<std::pair<std::string, std::string>>& oos_pairs();

}  // namespace hfm
