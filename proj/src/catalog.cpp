#include "hfm/catalog.hpp"

#include <algorithm>
#include <stdexcept>

namespace hfm {

namespace {

std::vector<ModelCatalogEntry> build_catalog() {
    std::vector<ModelCatalogEntry> c = {
        {"19", "dret", {"rvar", "rskew", "rkurt"}, "daily return on realized moments"},
        {"20", "dret", {"rvar", "nrskew", "nrkurt"}, "daily return on normalized moments"},
        {"21", "rvar", {"dret", "rskew", "rkurt"}, "variance on return and realized moments"},
        {"22", "rvar", {"dret", "nrskew", "nrkurt"}, "variance on return and normalized moments"},
        {"23", "rvar", {"tvol"}, "variance on trading volume"},
        {"24", "rvar", {"tvol", "rkurt"}, "variance on volume and kurtosis"},
        {"25", "rvar", {"dret_pos", "dret_neg"}, "variance on signed returns"},
        {"26", "rvar", {"dret_pos", "dret_neg", "rkurt"}, "variance on signed returns and kurtosis"},
        {"27", "rvar", {"rkurt", "tvol", "dret_pos", "dret_neg"}, "variance on all covariates"},
        {"28", "rvar", {"dret", "rskew"}, "restricted: return and skewness"},
        {"29", "rvar", {"tvol"}, "restricted: volume"},
        {"30", "rvar", {"dret_pos", "dret_neg"}, "restricted: signed returns"},
        {"31", "rvar", {"dret", "rskew", "rkurt"}, "augmented: return, skewness and kurtosis"},
        {"32", "rvar", {"tvol", "rkurt"}, "augmented: volume and kurtosis"},
        {"33", "rvar", {"dret_pos", "dret_neg", "rkurt"}, "augmented: signed returns and kurtosis"},
        {"34", "rvar", {"rvar"}, "first lag of variance"},
        {"35", "rvar", {"rvar", "rkurt"}, "first lag of variance and kurtosis"},
    };
    const auto base = c;
    auto by_id = [&base](const std::string& id) -> const ModelCatalogEntry& {
        return *std::find_if(base.begin(), base.end(), [&](const auto& e) { return e.model_id == id; });
    };
    for (const char* id : {"21", "24", "26", "27"}) {
        auto s = model_variant(by_id(id), "rvar", "sqrt_rkurt");
        s.model_id = std::string(id) + "s";
        s.description += " (square-root kurtosis)";
        c.push_back(std::move(s));
    }
    for (const char* id : {"21", "24", "26", "27"}) {
        auto b = model_variant(by_id(id), "bipower", "sqrt_rkurt");
        b.model_id = std::string(id) + "b";
        b.description += " (bipower response, square-root kurtosis)";
        c.push_back(std::move(b));
    }
    const std::vector<std::string> lags = {"rvar", "rvar_l1", "rvar_l2", "rvar_l3", "rvar_l4"};
    c.push_back({"34L5", "rvar", lags, "five lags of variance"});
    auto lags_k = lags;
    lags_k.push_back("rkurt");
    c.push_back({"35L5", "rvar", lags_k, "five lags of variance and kurtosis"});
    return c;
}

}  // namespace

const std::vector<ModelCatalogEntry>& model_catalog() {
    static const std::vector<ModelCatalogEntry> catalog = build_catalog();
    return catalog;
}

const ModelCatalogEntry& find_model(const std::string& model_id) {
    const auto& c = model_catalog();
    auto it = std::find_if(c.begin(), c.end(), [&](const auto& e) { return e.model_id == model_id; });
    if (it == c.end()) throw std::invalid_argument("unknown model id '" + model_id + "'");
    return *it;
}

ModelCatalogEntry model_variant(const ModelCatalogEntry& base, const std::string& response,
                                const std::string& kurtosis_form) {
    ModelCatalogEntry out = base;
    out.response = response;
    std::replace(out.regressors.begin(), out.regressors.end(), std::string("rkurt"), kurtosis_form);
    return out;
}

const std::vector<std::pair<std::string, std::string>>& oos_pairs() {
    static const std::vector<std::pair<std::string, std::string>> pairs = {
        {"28", "31"}, {"29", "32"}, {"30", "33"}, {"34", "35"}};
    return pairs;
}

}  // namespace hfm
