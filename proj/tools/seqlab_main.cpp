#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seqlab/commands.hpp"
#include "seqlab/errors.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::int64_t seed = -1;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_jobs) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration");
    cmd->add_option("--set", opts.sets, "override a config key, e.g. --set optim.seed=3");
    cmd->add_option("--seed", opts.seed, "shorthand for --set optim.seed=N");
    if (with_jobs) cmd->add_option("--jobs", opts.jobs, "parallel workers for fold runs");
}

seqlab::RunConfig resolve(const CommonOpts& opts) {
    std::vector<std::string> sets = opts.sets;
    if (opts.seed >= 0) sets.push_back("optim.seed=" + std::to_string(opts.seed));
    if (opts.jobs > 0) sets.push_back("cv.jobs=" + std::to_string(opts.jobs));
    return seqlab::load_config(opts.config_path, sets);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-task BiLSTM-CRF sequence labeling laboratory"};
    app.require_subcommand(1);

    CommonOpts train_opts;
    bool dry_run = false;
    CLI::App* train = app.add_subcommand("train", "train one model per the config");
    add_common(train, train_opts, false);
    train->add_flag("--dry-run", dry_run, "print resolved config and parameter counts only");

    CommonOpts cv_opts;
    CLI::App* crossval =
        app.add_subcommand("crossval", "cross-validated comparison with significance tests");
    add_common(crossval, cv_opts, true);

    seqlab::PredictArgs predict_args;
    CLI::App* predict = app.add_subcommand("predict", "decode a file with a trained checkpoint");
    predict->add_option("--checkpoint", predict_args.checkpoint)->required();
    predict->add_option("--input", predict_args.input)->required();
    predict->add_option("--output", predict_args.output, "prediction dump path (stdout if empty)");
    predict->add_option("--embeddings", predict_args.embeddings)->required();
    predict->add_option("--format", predict_args.format, "input format: orl | srl");

    seqlab::PredictArgs eval_args;
    CLI::App* evalc = app.add_subcommand("eval", "score a checkpoint against a gold file");
    evalc->add_option("--checkpoint", eval_args.checkpoint)->required();
    evalc->add_option("--input", eval_args.input)->required();
    evalc->add_option("--output", eval_args.output, "report path (stdout only if empty)");
    evalc->add_option("--embeddings", eval_args.embeddings)->required();
    evalc->add_option("--format", eval_args.format, "input format: orl | srl");

    seqlab::GradcheckArgs gc_args;
    CLI::App* gradcheck =
        app.add_subcommand("gradcheck", "finite-difference check of the full model gradient");
    gradcheck->add_option("--arch", gc_args.arch_kind, "STL | FS | H | SP | ASP");
    gradcheck->add_option("--hidden", gc_args.hidden);
    gradcheck->add_option("--emb-dim", gc_args.emb_dim);
    gradcheck->add_option("--seq-len", gc_args.seq_len);
    gradcheck->add_option("--epsilon", gc_args.epsilon);
    gradcheck->add_option("--seed", gc_args.seed);

    seqlab::SynthSpec synth_spec;
    std::string synth_out = "synth_out";
    std::string synth_pattern = "holder-left";
    int synth_emb_dim = 100;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    synth->add_option("--pattern", synth_pattern,
                      "holder-left | holder-right | srl-a0a1 | mixed-mapping");
    synth->add_option("--sentences", synth_spec.n_sentences);
    synth->add_option("--vocab", synth_spec.vocab_size);
    synth->add_option("--min-len", synth_spec.min_len);
    synth->add_option("--max-len", synth_spec.max_len);
    synth->add_option("--noise", synth_spec.noise_rate);
    synth->add_option("--seed", synth_spec.seed);
    synth->add_flag("--disjoint-vocab", synth_spec.disjoint_vocab);
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--emb-dim", synth_emb_dim, "dimension of the generated embedding file");

    seqlab::StabilityArgs stab_args;
    CLI::App* stability =
        app.add_subcommand("stability", "categorize predictions over repeated trials");
    stability->add_option("--dumps", stab_args.dumps, "prediction dump files")->required();
    stability->add_option("--gold", stab_args.gold)->required();
    stability->add_option("--trials", stab_args.trials, "expected number of dumps");
    stability->add_option("--output", stab_args.output, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) return seqlab::cmd_train(resolve(train_opts), dry_run);
        if (crossval->parsed()) return seqlab::cmd_crossval(resolve(cv_opts));
        if (predict->parsed()) return seqlab::cmd_predict(predict_args);
        if (evalc->parsed()) return seqlab::cmd_eval(eval_args);
        if (gradcheck->parsed()) return seqlab::cmd_gradcheck(gc_args);
        if (synth->parsed()) {
            synth_spec.pattern = seqlab::pattern_from_name(synth_pattern);
            return seqlab::cmd_synth(synth_spec, synth_out, synth_emb_dim);
        }
        if (stability->parsed()) return seqlab::cmd_stability(stab_args);
    } catch (const seqlab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
