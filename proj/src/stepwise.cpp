#include "hfm/stats.hpp"

namespace hfm {

namespace {

std::vector<std::string> chosen_names(const AlignedPanel& candidates, const std::vector<bool>& in) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < in.size(); ++j) {
        if (in[j]) out.push_back(candidates.names[j]);
    }
    return out;
}

}  // namespace

StepwiseResult stepwise_aic(const AlignedPanel& candidates) {
    std::vector<bool> in(candidates.names.size(), true);
    RegressionResult current = ols_fit(candidates.select(chosen_names(candidates, in)));

    while (true) {
        std::optional<std::size_t> best_move;
        RegressionResult best_fit;
        double best_aic = current.aic;
        for (std::size_t j = 0; j < in.size(); ++j) {
            auto trial = in;
            trial[j] = !trial[j];
            auto fit = ols_fit(candidates.select(chosen_names(candidates, trial)));
            if (fit.aic < best_aic) {
                best_aic = fit.aic;
                best_move = j;
                best_fit = std::move(fit);
            }
        }
        if (!best_move) break;
        in[*best_move] = !in[*best_move];
        current = std::move(best_fit);
    }
    return {chosen_names(candidates, in), std::move(current)};
}

}  // namespace hfm
