#include "seqlab/config.hpp"

#include <filesystem>

#include "json.hpp"
#include "seqlab/errors.hpp"

namespace seqlab {

using nlohmann::json;

RunConfig default_config() {
    RunConfig cfg;
    cfg.optim.max_iters = 0;  // auto
    return cfg;
}

namespace {

json config_to_tree(const RunConfig& c) {
    return {
        {"arch",
         {{"kind", c.arch.kind},
          {"tasks", c.arch.tasks},
          {"h_mtl_tap_layer", c.arch.h_mtl_tap_layer},
          {"adv_scale", c.arch.adv_scale}}},
        {"model",
         {{"emb_dim", c.model.emb_dim},
          {"hidden", c.model.hidden},
          {"layers", c.model.layers},
          {"context_window", c.model.context_window},
          {"indicator_window", c.model.indicator_window}}},
        {"dropout",
         {{"input_keep", c.dropout.input_keep},
          {"recurrent_keep", c.dropout.recurrent_keep},
          {"output_keep", c.dropout.output_keep},
          {"classifier_keep", c.dropout.classifier_keep}}},
        {"optim",
         {{"lr", c.optim.lr},
          {"beta1", c.optim.beta1},
          {"beta2", c.optim.beta2},
          {"eps", c.optim.eps},
          {"clip_norm", c.optim.clip_norm},
          {"batch_size", c.optim.batch_size},
          {"max_iters", c.optim.max_iters},
          {"patience_epochs", c.optim.patience_epochs},
          {"seed", c.optim.seed}}},
        {"paths",
         {{"srl_train", c.paths.srl_train},
          {"srl_dev", c.paths.srl_dev},
          {"srl_test", c.paths.srl_test},
          {"orl_train", c.paths.orl_train},
          {"orl_dev", c.paths.orl_dev},
          {"orl_test", c.paths.orl_test},
          {"orl_json", c.paths.orl_json},
          {"embeddings", c.paths.embeddings},
          {"output_dir", c.paths.output_dir}}},
        {"cv",
         {{"k", c.cv.k},
          {"dev_count", c.cv.dev_count},
          {"seeds", c.cv.seeds},
          {"archs", c.cv.archs},
          {"jobs", c.cv.jobs}}},
    };
}

// Merge `patch` into `base`, rejecting keys that the defaults do not define.
void merge_checked(json& base, const json& patch, const std::string& prefix) {
    if (!patch.is_object()) {
        throw ConfigError("config: expected an object at '" + (prefix.empty() ? "." : prefix) +
                          "'");
    }
    for (const auto& [key, value] : patch.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!base.contains(key)) throw ConfigError("config: unknown key '" + path + "'");
        if (base[key].is_object()) {
            merge_checked(base[key], value, path);
        } else {
            base[key] = value;
        }
    }
}

void apply_override(json& tree, const std::string& setting) {
    const auto eq = setting.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("config: override must look like key.path=value, got '" + setting +
                          "'");
    }
    const std::string path = setting.substr(0, eq);
    const std::string raw = setting.substr(eq + 1);

    json* node = &tree;
    std::size_t begin = 0;
    std::vector<std::string> parts;
    while (begin <= path.size()) {
        const auto dot = path.find('.', begin);
        parts.push_back(path.substr(begin, dot == std::string::npos ? std::string::npos
                                                                    : dot - begin));
        if (dot == std::string::npos) break;
        begin = dot + 1;
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object()) {
            throw ConfigError("config: unknown key '" + path + "'");
        }
        node = &(*node)[parts[i]];
    }
    if (!node->contains(parts.back()) || (*node)[parts.back()].is_object()) {
        throw ConfigError("config: unknown key '" + path + "'");
    }
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // plain string
    (*node)[parts.back()] = value;
}

template <typename T>
T pull(const json& j, const std::string& section, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config: bad value for '" + section + "." + key + "': " + e.what());
    }
}

RunConfig tree_to_config(const json& t) {
    RunConfig c;
    const json& a = t.at("arch");
    c.arch.kind = pull<std::string>(a, "arch", "kind");
    c.arch.tasks = pull<std::vector<std::string>>(a, "arch", "tasks");
    c.arch.h_mtl_tap_layer = pull<int>(a, "arch", "h_mtl_tap_layer");
    c.arch.adv_scale = pull<double>(a, "arch", "adv_scale");
    const json& m = t.at("model");
    c.model.emb_dim = pull<int>(m, "model", "emb_dim");
    c.model.hidden = pull<int>(m, "model", "hidden");
    c.model.layers = pull<int>(m, "model", "layers");
    c.model.context_window = pull<int>(m, "model", "context_window");
    c.model.indicator_window = pull<int>(m, "model", "indicator_window");
    const json& d = t.at("dropout");
    c.dropout.input_keep = pull<double>(d, "dropout", "input_keep");
    c.dropout.recurrent_keep = pull<double>(d, "dropout", "recurrent_keep");
    c.dropout.output_keep = pull<double>(d, "dropout", "output_keep");
    c.dropout.classifier_keep = pull<double>(d, "dropout", "classifier_keep");
    const json& o = t.at("optim");
    c.optim.lr = pull<double>(o, "optim", "lr");
    c.optim.beta1 = pull<double>(o, "optim", "beta1");
    c.optim.beta2 = pull<double>(o, "optim", "beta2");
    c.optim.eps = pull<double>(o, "optim", "eps");
    c.optim.clip_norm = pull<double>(o, "optim", "clip_norm");
    c.optim.batch_size = pull<int>(o, "optim", "batch_size");
    c.optim.max_iters = pull<std::int64_t>(o, "optim", "max_iters");
    c.optim.patience_epochs = pull<int>(o, "optim", "patience_epochs");
    c.optim.seed = pull<std::uint64_t>(o, "optim", "seed");
    const json& p = t.at("paths");
    c.paths.srl_train = pull<std::string>(p, "paths", "srl_train");
    c.paths.srl_dev = pull<std::string>(p, "paths", "srl_dev");
    c.paths.srl_test = pull<std::string>(p, "paths", "srl_test");
    c.paths.orl_train = pull<std::string>(p, "paths", "orl_train");
    c.paths.orl_dev = pull<std::string>(p, "paths", "orl_dev");
    c.paths.orl_test = pull<std::string>(p, "paths", "orl_test");
    c.paths.orl_json = pull<std::string>(p, "paths", "orl_json");
    c.paths.embeddings = pull<std::string>(p, "paths", "embeddings");
    c.paths.output_dir = pull<std::string>(p, "paths", "output_dir");
    const json& v = t.at("cv");
    c.cv.k = pull<int>(v, "cv", "k");
    c.cv.dev_count = pull<int>(v, "cv", "dev_count");
    c.cv.seeds = pull<std::vector<std::uint64_t>>(v, "cv", "seeds");
    c.cv.archs = pull<std::vector<std::string>>(v, "cv", "archs");
    c.cv.jobs = pull<int>(v, "cv", "jobs");
    return c;
}

void check_paths_exist(const RunConfig& c) {
    const std::vector<std::pair<std::string, std::string>> fields = {
        {"paths.srl_train", c.paths.srl_train}, {"paths.srl_dev", c.paths.srl_dev},
        {"paths.srl_test", c.paths.srl_test},   {"paths.orl_train", c.paths.orl_train},
        {"paths.orl_dev", c.paths.orl_dev},     {"paths.orl_test", c.paths.orl_test},
        {"paths.orl_json", c.paths.orl_json},   {"paths.embeddings", c.paths.embeddings},
    };
    for (const auto& [name, value] : fields) {
        if (!value.empty() && !std::filesystem::exists(value)) {
            throw ConfigError("config: " + name + " does not exist: " + value);
        }
    }
}

}  // namespace

RunConfig resolve_config(const std::string& json_text, const std::vector<std::string>& overrides) {
    json tree = config_to_tree(default_config());
    if (!json_text.empty()) {
        json file = json::parse(json_text, nullptr, false);
        if (file.is_discarded()) throw ConfigError("config: file is not valid JSON");
        merge_checked(tree, file, "");
    }
    for (const auto& setting : overrides) apply_override(tree, setting);

    RunConfig cfg = tree_to_config(tree);
    if (cfg.optim.max_iters == 0) {
        cfg.optim.max_iters = (cfg.arch.kind == "STL") ? 10000 : 20000;
    }
    try {
        cfg.model.validate();
        cfg.dropout.validate();
        cfg.optim.validate();
    } catch (const ContractError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (cfg.arch.tasks.empty()) throw ConfigError("config: arch.tasks must not be empty");
    try {
        arch_kind_from_name(cfg.arch.kind);
        for (const auto& t : cfg.arch.tasks) task_from_name(t);
    } catch (const ContractError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    check_paths_exist(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    if (path.empty()) return resolve_config("", overrides);
    if (!std::filesystem::exists(path)) throw ConfigError("config: file not found: " + path);
    return resolve_config(read_text_file(path), overrides);
}

std::string config_to_json(const RunConfig& cfg) { return config_to_tree(cfg).dump(2); }

}  // namespace seqlab
