#include "seqlab/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "seqlab/errors.hpp"

namespace seqlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// base64

namespace {
const char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string base64_encode(const unsigned char* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        const unsigned b0 = data[i];
        const unsigned b1 = i + 1 < len ? data[i + 1] : 0;
        const unsigned b2 = i + 2 < len ? data[i + 2] : 0;
        out.push_back(kB64Chars[b0 >> 2]);
        out.push_back(kB64Chars[((b0 & 0x3u) << 4) | (b1 >> 4)]);
        out.push_back(i + 1 < len ? kB64Chars[((b1 & 0xfu) << 2) | (b2 >> 6)] : '=');
        out.push_back(i + 2 < len ? kB64Chars[b2 & 0x3fu] : '=');
    }
    return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
    if (text.size() % 4 != 0) throw IoError("base64: length not a multiple of 4");
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int v[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            const char c = text[i + k];
            if (c == '=') {
                v[k] = 0;
                ++pad;
            } else {
                v[k] = b64_value(c);
                if (v[k] < 0 || pad > 0) throw IoError("base64: invalid character");
            }
        }
        out.push_back(static_cast<unsigned char>((v[0] << 2) | (v[1] >> 4)));
        if (pad < 2) out.push_back(static_cast<unsigned char>(((v[1] & 0xf) << 4) | (v[2] >> 2)));
        if (pad < 1) out.push_back(static_cast<unsigned char>(((v[2] & 0x3) << 6) | v[3]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// f64 <-> little-endian bytes

namespace {

std::string doubles_to_b64(const std::vector<double>& v) {
    std::vector<unsigned char> bytes(v.size() * 8);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint64_t u = std::bit_cast<std::uint64_t>(v[i]);
        for (int b = 0; b < 8; ++b) bytes[i * 8 + static_cast<std::size_t>(b)] =
            static_cast<unsigned char>((u >> (8 * b)) & 0xffu);
    }
    return base64_encode(bytes.data(), bytes.size());
}

std::vector<double> b64_to_doubles(const std::string& s) {
    const std::vector<unsigned char> bytes = base64_decode(s);
    if (bytes.size() % 8 != 0) throw IoError("checkpoint: payload not a multiple of 8 bytes");
    std::vector<double> v(bytes.size() / 8);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint64_t u = 0;
        for (int b = 7; b >= 0; --b) {
            u = (u << 8) | bytes[i * 8 + static_cast<std::size_t>(b)];
        }
        v[i] = std::bit_cast<double>(u);
    }
    return v;
}

json arch_to_json(const ArchSpec& arch) {
    json tasks = json::array();
    for (const auto& ts : arch.tasks) {
        tasks.push_back({{"task", task_name(ts.task)}, {"tags", ts.scheme.tags}});
    }
    return {{"kind", arch_kind_name(arch.kind)},
            {"tasks", tasks},
            {"h_mtl_tap_layer", arch.h_mtl_tap_layer},
            {"adv_scale", arch.adv_scale}};
}

ArchSpec arch_from_json(const json& j) {
    ArchSpec arch;
    arch.kind = arch_kind_from_name(j.at("kind").get<std::string>());
    for (const auto& jt : j.at("tasks")) {
        TaskSpec ts;
        ts.task = task_from_name(jt.at("task").get<std::string>());
        ts.scheme.task = ts.task;
        ts.scheme.tags = jt.at("tags").get<std::vector<std::string>>();
        arch.tasks.push_back(std::move(ts));
    }
    arch.h_mtl_tap_layer = j.at("h_mtl_tap_layer").get<int>();
    arch.adv_scale = j.at("adv_scale").get<double>();
    return arch;
}

}  // namespace

Checkpoint make_checkpoint(const Model& model, const Vocabulary& vocab, double best_dev_score,
                           std::int64_t iteration) {
    Checkpoint c;
    c.arch = model.arch;
    c.dims = model.dims;
    c.dropout = model.dropout;
    c.params = model.params.values();
    c.vocab_tokens = vocab.tokens();
    c.best_dev_score = best_dev_score;
    c.iteration = iteration;
    return c;
}

std::string checkpoint_to_json(const Checkpoint& ckpt) {
    json params = json::object();
    for (const auto& [name, t] : ckpt.params) {
        params[name] = {{"shape", t.shape()}, {"data", doubles_to_b64(t.vec())}};
    }
    const json j = {
        {"format_version", ckpt.format_version},
        {"arch", arch_to_json(ckpt.arch)},
        {"dims",
         {{"emb_dim", ckpt.dims.emb_dim},
          {"hidden", ckpt.dims.hidden},
          {"layers", ckpt.dims.layers},
          {"context_window", ckpt.dims.context_window},
          {"indicator_window", ckpt.dims.indicator_window}}},
        {"dropout",
         {{"input_keep", ckpt.dropout.input_keep},
          {"recurrent_keep", ckpt.dropout.recurrent_keep},
          {"output_keep", ckpt.dropout.output_keep},
          {"classifier_keep", ckpt.dropout.classifier_keep}}},
        {"params", params},
        {"vocab", ckpt.vocab_tokens},
        {"best_dev_score", ckpt.best_dev_score},
        {"iteration", ckpt.iteration},
    };
    return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("checkpoint: not valid JSON: ") + e.what());
    }
    try {
        Checkpoint c;
        c.format_version = j.at("format_version").get<int>();
        if (c.format_version != 1) {
            throw IoError("checkpoint: unsupported format_version " +
                          std::to_string(c.format_version));
        }
        c.arch = arch_from_json(j.at("arch"));
        const json& jd = j.at("dims");
        c.dims.emb_dim = jd.at("emb_dim").get<int>();
        c.dims.hidden = jd.at("hidden").get<int>();
        c.dims.layers = jd.at("layers").get<int>();
        c.dims.context_window = jd.at("context_window").get<int>();
        c.dims.indicator_window = jd.at("indicator_window").get<int>();
        const json& jr = j.at("dropout");
        c.dropout.input_keep = jr.at("input_keep").get<double>();
        c.dropout.recurrent_keep = jr.at("recurrent_keep").get<double>();
        c.dropout.output_keep = jr.at("output_keep").get<double>();
        c.dropout.classifier_keep = jr.at("classifier_keep").get<double>();
        for (const auto& [name, jp] : j.at("params").items()) {
            const auto shape = jp.at("shape").get<std::vector<std::int64_t>>();
            auto data = b64_to_doubles(jp.at("data").get<std::string>());
            c.params.emplace(name, Tensor(shape, std::move(data)));
        }
        c.vocab_tokens = j.at("vocab").get<std::vector<std::string>>();
        c.best_dev_score = j.at("best_dev_score").get<double>();
        c.iteration = j.at("iteration").get<std::int64_t>();
        return c;
    } catch (const json::exception& e) {
        throw IoError(std::string("checkpoint: malformed: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    out << checkpoint_to_json(ckpt);
    if (!out) throw IoError("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    return checkpoint_from_json(read_text_file(path));
}

void require_arch_match(const Checkpoint& ckpt, const ArchSpec& arch) {
    const auto fail = [](const std::string& what) {
        throw ContractError("checkpoint arch mismatch: " + what);
    };
    if (ckpt.arch.kind != arch.kind) {
        fail("kind " + arch_kind_name(ckpt.arch.kind) + " vs " + arch_kind_name(arch.kind));
    }
    if (ckpt.arch.tasks.size() != arch.tasks.size()) fail("task count differs");
    for (std::size_t i = 0; i < arch.tasks.size(); ++i) {
        if (ckpt.arch.tasks[i].task != arch.tasks[i].task) fail("task order differs");
        if (ckpt.arch.tasks[i].scheme.tags != arch.tasks[i].scheme.tags) {
            fail("label scheme differs for " + task_name(arch.tasks[i].task));
        }
    }
    if (ckpt.arch.kind == ArchKind::H && ckpt.arch.h_mtl_tap_layer != arch.h_mtl_tap_layer) {
        fail("tap layer differs");
    }
    if (ckpt.arch.kind == ArchKind::ASP && ckpt.arch.adv_scale != arch.adv_scale) {
        fail("adv_scale differs");
    }
}

Model model_from_checkpoint(const Checkpoint& ckpt) {
    Model model = build_model(ckpt.arch, ckpt.dims, ckpt.dropout, 0);
    if (ckpt.params.size() != model.params.values().size()) {
        throw IoError("checkpoint: expected " +
                      std::to_string(model.params.values().size()) + " parameters, file has " +
                      std::to_string(ckpt.params.size()));
    }
    for (auto& [name, value] : model.params.values()) {
        auto it = ckpt.params.find(name);
        if (it == ckpt.params.end()) throw IoError("checkpoint: missing parameter " + name);
        if (!it->second.same_shape(value)) {
            throw IoError("checkpoint: parameter " + name + " has shape " +
                          it->second.shape_str() + ", expected " + value.shape_str());
        }
        value = it->second;
    }
    return model;
}

Vocabulary vocab_from_checkpoint(const Checkpoint& ckpt) {
    return Vocabulary(ckpt.vocab_tokens);
}

}  // namespace seqlab
