#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dataset.hpp"
#include "graph.hpp"
#include "localfit.hpp"

namespace bnsl {

// Model JSON layout (see docs/formats.md): per-node family tag, parent
// names, and parameters. CPT tables are row-major by child level;
// regression coefficients follow parent order; variances are MLE values
// with the divisor-(n-p-1) estimate in "unbiased".
inline nlohmann::json model_to_json(const BnModel& model) {
    nlohmann::json out;
    out["schema"] = schema_to_json(model.schema);
    nlohmann::json nodes = nlohmann::json::array();
    auto col_name = [&](int col) { return model.schema.columns[col].name; };
    for (std::size_t i = 0; i < model.dag.num_nodes(); ++i) {
        nlohmann::json jn;
        jn["name"] = model.dag.name(static_cast<int>(i));
        std::vector<std::string> parents;
        for (int p : model.dag.parents(static_cast<int>(i))) parents.push_back(model.dag.name(p));
        jn["parents"] = parents;
        const auto& local = model.locals[i];
        if (const auto* cpt = std::get_if<Cpt>(&local)) {
            jn["family"] = "cpt";
            std::vector<std::string> cpt_parents;
            for (int p : cpt->parents) cpt_parents.push_back(col_name(p));
            jn["cpt_parents"] = cpt_parents;  // configuration order, first parent most significant
            nlohmann::json probs = nlohmann::json::array();
            nlohmann::json counts = nlohmann::json::array();
            for (int k = 0; k < cpt->levels; ++k) {
                nlohmann::json prow = nlohmann::json::array(), crow = nlohmann::json::array();
                for (long cfg = 0; cfg < cpt->q; ++cfg) {
                    prow.push_back(cpt->probs[static_cast<std::size_t>(k) * cpt->q + cfg]);
                    crow.push_back(cpt->counts[static_cast<std::size_t>(k) * cpt->q + cfg]);
                }
                probs.push_back(std::move(prow));
                counts.push_back(std::move(crow));
            }
            jn["probs"] = std::move(probs);
            jn["counts"] = std::move(counts);
        } else if (const auto* reg = std::get_if<GaussRegression>(&local)) {
            jn["family"] = "gauss";
            std::vector<std::string> gp;
            for (int p : reg->parents) gp.push_back(col_name(p));
            jn["continuous_parents"] = gp;
            jn["intercept"] = reg->intercept;
            jn["coefficients"] = reg->coef;
            jn["sigma2"] = reg->sigma2;
            jn["unbiased"] = reg->sigma2_unbiased;
        } else {
            const auto& mix = std::get<ClgMixture>(local);
            jn["family"] = "clg";
            std::vector<std::string> dp, gp;
            for (int p : mix.dparents) dp.push_back(col_name(p));
            for (int p : mix.gparents) gp.push_back(col_name(p));
            jn["discrete_parents"] = dp;
            jn["continuous_parents"] = gp;
            nlohmann::json comps = nlohmann::json::array();
            for (long cfg = 0; cfg < mix.q; ++cfg) {
                const auto& c = mix.components[cfg];
                nlohmann::json jc;
                jc["intercept"] = c.intercept;
                jc["coefficients"] = c.coef;
                jc["sigma2"] = c.sigma2;
                jc["unbiased"] = c.sigma2_unbiased;
                jc["count"] = c.count;
                jc["observed"] = c.observed;
                comps.push_back(std::move(jc));
            }
            jn["components"] = std::move(comps);
        }
        nodes.push_back(std::move(jn));
    }
    out["nodes"] = std::move(nodes);
    return out;
}

inline BnModel model_from_json(const nlohmann::json& j) {
    BnModel model;
    model.schema = schema_from_json(j.at("schema"));
    std::vector<std::string> names;
    for (const auto& jn : j.at("nodes")) names.push_back(jn.at("name").get<std::string>());
    model.dag = Dag(names);
    for (const auto& jn : j.at("nodes")) {
        int child = model.dag.node(jn.at("name").get<std::string>());
        for (const auto& pn : jn.at("parents"))
            model.dag.add_arc_unchecked(model.dag.node(pn.get<std::string>()), child);
    }
    // validate acyclicity
    (void)topological_order(model.dag);

    auto col_of = [&](const std::string& name) {
        int c = model.schema.index_of(name);
        if (c < 0) throw std::runtime_error("model json: unknown column " + name);
        return c;
    };

    model.locals.resize(names.size());
    std::size_t i = 0;
    for (const auto& jn : j.at("nodes")) {
        std::string family = jn.at("family").get<std::string>();
        int child = col_of(jn.at("name").get<std::string>());
        if (family == "cpt") {
            Cpt cpt;
            cpt.child = child;
            for (const auto& pn : jn.at("cpt_parents")) cpt.parents.push_back(col_of(pn.get<std::string>()));
            cpt.levels = static_cast<int>(model.schema.columns[child].levels.size());
            cpt.q = 1;
            for (int p : cpt.parents) cpt.q *= static_cast<long>(model.schema.columns[p].levels.size());
            cpt.probs.assign(static_cast<std::size_t>(cpt.levels) * cpt.q, 0.0);
            cpt.counts.assign(cpt.probs.size(), 0.0);
            const auto& probs = jn.at("probs");
            for (int k = 0; k < cpt.levels; ++k)
                for (long cfg = 0; cfg < cpt.q; ++cfg)
                    cpt.probs[static_cast<std::size_t>(k) * cpt.q + cfg] = probs.at(k).at(cfg).get<double>();
            if (jn.contains("counts")) {
                const auto& counts = jn.at("counts");
                for (int k = 0; k < cpt.levels; ++k)
                    for (long cfg = 0; cfg < cpt.q; ++cfg)
                        cpt.counts[static_cast<std::size_t>(k) * cpt.q + cfg] =
                            counts.at(k).at(cfg).get<double>();
            }
            model.locals[i] = std::move(cpt);
        } else if (family == "gauss") {
            GaussRegression reg;
            reg.child = child;
            for (const auto& pn : jn.at("continuous_parents"))
                reg.parents.push_back(col_of(pn.get<std::string>()));
            reg.intercept = jn.at("intercept").get<double>();
            reg.coef = jn.at("coefficients").get<std::vector<double>>();
            reg.sigma2 = jn.at("sigma2").get<double>();
            reg.sigma2_unbiased = jn.at("unbiased").get<double>();
            model.locals[i] = std::move(reg);
        } else if (family == "clg") {
            ClgMixture mix;
            mix.child = child;
            for (const auto& pn : jn.at("discrete_parents"))
                mix.dparents.push_back(col_of(pn.get<std::string>()));
            for (const auto& pn : jn.at("continuous_parents"))
                mix.gparents.push_back(col_of(pn.get<std::string>()));
            mix.q = 1;
            for (int p : mix.dparents) mix.q *= static_cast<long>(model.schema.columns[p].levels.size());
            const auto& comps = jn.at("components");
            if (static_cast<long>(comps.size()) != mix.q)
                throw std::runtime_error("model json: component count mismatch");
            for (const auto& jc : comps) {
                ClgComponent c;
                c.intercept = jc.at("intercept").get<double>();
                c.coef = jc.at("coefficients").get<std::vector<double>>();
                c.sigma2 = jc.at("sigma2").get<double>();
                c.sigma2_unbiased = jc.at("unbiased").get<double>();
                c.count = jc.value("count", 0L);
                c.observed = jc.value("observed", true);
                mix.components.push_back(std::move(c));
            }
            model.locals[i] = std::move(mix);
        } else {
            throw std::runtime_error("model json: unknown family " + family);
        }
        ++i;
    }
    return model;
}

inline void save_model(const BnModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << model_to_json(model).dump(2) << "\n";
}

inline BnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

}  // namespace bnsl
