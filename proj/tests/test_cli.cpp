#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "seqlab/commands.hpp"
#include "seqlab/errors.hpp"

using namespace seqlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("seqlab_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("config defaults follow the training recipe") {
    const RunConfig cfg = resolve_config("", {});
    CHECK(cfg.optim.lr == 1e-3);
    CHECK(cfg.optim.beta1 == 0.9);
    CHECK(cfg.optim.beta2 == 0.999);
    CHECK(cfg.optim.clip_norm == 1.0);
    CHECK(cfg.optim.batch_size == 32);
    CHECK(cfg.optim.patience_epochs == 25);
    CHECK(cfg.optim.max_iters == 10000);  // auto for STL
    CHECK(cfg.model.hidden == 100);
    CHECK(cfg.model.emb_dim == 100);
    CHECK(cfg.model.layers == 3);
    CHECK(cfg.dropout.input_keep == 0.7);
    CHECK(cfg.dropout.recurrent_keep == 0.85);
    CHECK(cfg.dropout.output_keep == 0.85);
    CHECK(cfg.dropout.classifier_keep == 0.85);
    CHECK(cfg.arch.kind == "STL");
    CHECK(cfg.arch.adv_scale == 0.1);
    CHECK(cfg.arch.h_mtl_tap_layer == 2);
    CHECK(cfg.cv.k == 4);
    CHECK(cfg.cv.seeds == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("MTL kinds auto-default to 20000 iterations") {
    const RunConfig cfg = resolve_config(R"({"arch": {"kind": "FS", "tasks": ["srl", "orl"]}})", {});
    CHECK(cfg.optim.max_iters == 20000);
    const RunConfig expl = resolve_config(
        R"({"arch": {"kind": "FS", "tasks": ["srl", "orl"]}, "optim": {"max_iters": 50}})", {});
    CHECK(expl.optim.max_iters == 50);
}

TEST_CASE("unknown keys are rejected with their path") {
    try {
        resolve_config(R"({"optim": {"learning_rate": 0.1}})", {});
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("optim.learning_rate") != std::string::npos);
    }
    CHECK_THROWS_AS(resolve_config(R"({"optimizer": {}})", {}), ConfigError);
    CHECK_THROWS_AS(resolve_config("[1,2]", {}), ConfigError);
    CHECK_THROWS_AS(resolve_config("not json", {}), ConfigError);
}

TEST_CASE("overrides: flags beat file beats defaults") {
    const RunConfig cfg = resolve_config(R"({"optim": {"batch_size": 16}})",
                                         {"optim.batch_size=8", "arch.kind=SP",
                                          "arch.tasks=[\"srl\",\"orl\"]",
                                          "paths.output_dir=somewhere"});
    CHECK(cfg.optim.batch_size == 8);
    CHECK(cfg.arch.kind == "SP");
    CHECK(cfg.arch.tasks == std::vector<std::string>{"srl", "orl"});
    CHECK(cfg.paths.output_dir == "somewhere");

    CHECK_THROWS_AS(resolve_config("", {"optim.nope=1"}), ConfigError);
    CHECK_THROWS_AS(resolve_config("", {"garbage"}), ConfigError);
}

TEST_CASE("config validation failures map to ConfigError") {
    CHECK_THROWS_AS(resolve_config(R"({"arch": {"kind": "XXL"}})", {}), ConfigError);
    CHECK_THROWS_AS(resolve_config(R"({"arch": {"tasks": ["pos"]}})", {}), ConfigError);
    CHECK_THROWS_AS(resolve_config(R"({"optim": {"lr": -1}})", {}), ConfigError);
    CHECK_THROWS_AS(resolve_config(R"({"dropout": {"input_keep": 0.0}})", {}), ConfigError);
    CHECK_THROWS_AS(resolve_config(R"({"paths": {"embeddings": "/no/such/file"}})", {}),
                    ConfigError);
}

TEST_CASE("resolved config echo parses back identically") {
    const RunConfig cfg = resolve_config(R"({"optim": {"seed": 42}})", {"cv.jobs=3"});
    const RunConfig back = resolve_config(config_to_json(cfg), {});
    CHECK(back.optim.seed == 42);
    CHECK(back.cv.jobs == 3);
    CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("load_train_data assembles tasks, vocab and schemes from files") {
    TempDir tmp;
    SynthSpec orl_spec;
    orl_spec.pattern = SynthPattern::HolderLeft;
    orl_spec.n_sentences = 12;
    orl_spec.vocab_size = 15;
    orl_spec.seed = 5;
    const SynthCorpus orl = generate(orl_spec);
    SynthSpec srl_spec = orl_spec;
    srl_spec.pattern = SynthPattern::SrlA0A1;
    const SynthCorpus srl = generate(srl_spec);

    write(tmp.file("orl.json"), to_orl_json(orl));
    write(tmp.file("srl.cols"), to_srl_columns(srl));
    std::vector<std::string> words = orl.vocabulary;
    write(tmp.file("emb.txt"), make_embedding_file(words, 4, 1));

    const RunConfig cfg = resolve_config(
        std::string(R"({"arch": {"kind": "FS", "tasks": ["srl", "orl"]},
          "model": {"emb_dim": 4, "hidden": 3},
          "paths": {"srl_train": ")") + tmp.file("srl.cols") +
            R"(", "orl_train": ")" + tmp.file("orl.json") +
            R"(", "embeddings": ")" + tmp.file("emb.txt") + R"("}})",
        {});
    const LoadedData loaded = load_train_data(cfg);
    CHECK(loaded.arch.kind == ArchKind::FS);
    REQUIRE(loaded.arch.tasks.size() == 2);
    CHECK(loaded.arch.tasks[0].task == Task::SRL);
    CHECK(loaded.arch.tasks[1].scheme.size() == 7);
    CHECK(loaded.data.tasks[0].train.size() == 12);
    CHECK(loaded.data.tasks[1].train.size() == 12);
    CHECK(loaded.data.tasks[1].dev.size() == 12);  // dev defaults to train
    CHECK(loaded.data.vocab.size() > 10);
    CHECK(loaded.data.embeddings.dim == 4);

    // missing embeddings: the error names the field
    RunConfig broken = cfg;
    broken.paths.embeddings = "";
    try {
        load_train_data(broken);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("paths.embeddings") != std::string::npos);
    }
}

TEST_CASE("cmd_synth writes corpus, embeddings and manifest") {
    TempDir tmp;
    SynthSpec spec;
    spec.pattern = SynthPattern::MixedMapping;
    spec.n_sentences = 6;
    spec.seed = 8;
    CHECK(cmd_synth(spec, tmp.file("out"), 5) == 0);
    CHECK(fs::exists(tmp.file("out") + "/orl.json"));
    CHECK(fs::exists(tmp.file("out") + "/embeddings.txt"));
    CHECK(fs::exists(tmp.file("out") + "/manifest.json"));
    const auto parsed = parse_orl_json(read_text_file(tmp.file("out") + "/orl.json"));
    CHECK(parsed.size() == 6);

    SynthSpec srl = spec;
    srl.pattern = SynthPattern::SrlA0A1;
    CHECK(cmd_synth(srl, tmp.file("out_srl"), 5) == 0);
    CHECK(fs::exists(tmp.file("out_srl") + "/srl.cols"));
}

TEST_CASE("cmd_gradcheck on a tiny model prints and passes") {
    GradcheckArgs args;
    args.hidden = 3;
    args.emb_dim = 3;
    args.seq_len = 4;
    CHECK(cmd_gradcheck(args) == 0);
    for (const char* kind : {"H", "SP", "ASP"}) {
        args.arch_kind = kind;
        CHECK(cmd_gradcheck(args) == 0);
    }
}

TEST_CASE("cmd_crossval: folds x seeds feed KS comparisons between archs") {
    TempDir tmp;
    SynthSpec orl_spec;
    orl_spec.pattern = SynthPattern::MixedMapping;
    orl_spec.n_sentences = 60;  // 6 documents of 10 sentences
    orl_spec.vocab_size = 15;
    orl_spec.seed = 77;
    const SynthCorpus orl = generate(orl_spec);
    SynthSpec srl_spec = orl_spec;
    srl_spec.pattern = SynthPattern::SrlA0A1;
    srl_spec.n_sentences = 20;
    const SynthCorpus srl = generate(srl_spec);

    write(tmp.file("orl.json"), to_orl_json(orl));
    write(tmp.file("srl.cols"), to_srl_columns(srl));
    write(tmp.file("emb.txt"), make_embedding_file(orl.vocabulary, 4, 1));

    const std::string base = std::string(R"({
      "model": {"emb_dim": 4, "hidden": 3, "layers": 1},
      "optim": {"max_iters": 4, "batch_size": 16, "seed": 9},
      "cv": {"k": 2, "dev_count": 2, "seeds": [1, 2], "archs": ["STL", "FS", "FS"]},
      "paths": {"orl_json": ")") + tmp.file("orl.json") +
                             R"(", "srl_train": ")" + tmp.file("srl.cols") +
                             R"(", "embeddings": ")" + tmp.file("emb.txt") +
                             R"(", "output_dir": ")" + tmp.file("cv_out") + R"("}})";
    const RunConfig cfg = resolve_config(base, {});
    CHECK(cmd_crossval(cfg) == 0);

    CHECK(fs::exists(tmp.file("cv_out") + "/crossval_summary.json"));
    CHECK(fs::exists(tmp.file("cv_out") + "/crossval_table.txt"));
    const auto summary =
        nlohmann::json::parse(read_text_file(tmp.file("cv_out") + "/crossval_summary.json"));
    // 2 folds x 2 seeds = 4 evaluations per arch per metric feed ks_test
    CHECK(summary["archs"]["STL"]["holder/prop_f1"]["values"].size() == 4);
    CHECK(summary["archs"]["FS"]["holder/prop_f1"]["values"].size() == 4);
    CHECK(summary["archs"]["FS"]["holder/prop_f1"].contains("ks_vs_stl"));
    // self-comparison (FS listed twice, and each arch vs itself): D = 0
    CHECK(summary["archs"]["FS"]["holder/prop_f1"]["ks_vs_fs"]["d"].get<double>() == 0.0);
    CHECK(summary["archs"]["STL"]["holder/prop_f1"]["ks_vs_stl"]["d"].get<double>() == 0.0);
    CHECK(summary["archs"]["STL"]["holder/prop_f1"]["ks_vs_stl"]["p"].get<double>() == 1.0);
    // prediction dumps: one dev dump per (arch, seed, fold)
    int dumps = 0;
    for (const auto& entry : fs::directory_iterator(tmp.file("cv_out") + "/predictions")) {
        (void)entry;
        ++dumps;
    }
    CHECK(dumps == 8);

    // one arch only: significance section empty, summary still emitted
    RunConfig solo = cfg;
    solo.cv.archs = {"STL"};
    solo.paths.output_dir = tmp.file("cv_solo");
    CHECK(cmd_crossval(solo) == 0);
    const auto solo_summary =
        nlohmann::json::parse(read_text_file(tmp.file("cv_solo") + "/crossval_summary.json"));
    CHECK_FALSE(solo_summary["archs"]["STL"]["holder/prop_f1"].contains("ks_vs_stl"));

    // parallel workers produce the same summary
    RunConfig par = cfg;
    par.cv.jobs = 2;
    par.paths.output_dir = tmp.file("cv_par");
    CHECK(cmd_crossval(par) == 0);
    CHECK(read_text_file(tmp.file("cv_par") + "/crossval_summary.json") ==
          read_text_file(tmp.file("cv_out") + "/crossval_summary.json"));
}

TEST_CASE("cv_arch_spec builds task lists per kind") {
    const RunConfig cfg = resolve_config("", {});
    const LabelScheme srl = make_label_scheme(Task::SRL, {"A0", "A1"});
    const ArchSpec stl = cv_arch_spec("STL", cfg, srl);
    CHECK(stl.kind == ArchKind::STL);
    CHECK(stl.tasks.size() == 1);
    CHECK(stl.tasks[0].task == Task::ORL);
    const ArchSpec h = cv_arch_spec("H", cfg, srl);
    CHECK(h.tasks.size() == 2);
    CHECK(h.tasks[0].task == Task::SRL);
    CHECK(h.h_mtl_tap_layer == 2);
}
