#include "seqlab/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "seqlab/errors.hpp"
#include "seqlab/rng.hpp"

namespace seqlab {

using nlohmann::json;

std::string pattern_name(SynthPattern p) {
    switch (p) {
        case SynthPattern::HolderLeft: return "holder-left";
        case SynthPattern::HolderRight: return "holder-right";
        case SynthPattern::SrlA0A1: return "srl-a0a1";
        case SynthPattern::MixedMapping: return "mixed-mapping";
    }
    return "?";
}

SynthPattern pattern_from_name(const std::string& s) {
    if (s == "holder-left") return SynthPattern::HolderLeft;
    if (s == "holder-right") return SynthPattern::HolderRight;
    if (s == "srl-a0a1") return SynthPattern::SrlA0A1;
    if (s == "mixed-mapping") return SynthPattern::MixedMapping;
    throw ContractError("unknown synth pattern: " + s);
}

void SynthSpec::validate() const {
    if (n_sentences < 1) throw ContractError("SynthSpec: n_sentences must be >= 1");
    if (vocab_size < 10) throw ContractError("SynthSpec: vocab_size must be >= 10");
    if (min_len < 3 || max_len < min_len) {
        throw ContractError("SynthSpec: need 3 <= min_len <= max_len");
    }
    if (noise_rate < 0.0 || noise_rate >= 1.0) {
        throw ContractError("SynthSpec: noise_rate must be in [0, 1)");
    }
}

namespace {

// The two cue lexemes mirror the flipped role mappings of "fear"-like and
// "please"-like predicates. Both behave the same everywhere except under
// MixedMapping.
const char* kCueA = "fearish";
const char* kCueB = "pleaseish";

}  // namespace

SynthCorpus generate(const SynthSpec& spec) {
    spec.validate();
    const bool srl = spec.pattern == SynthPattern::SrlA0A1;
    const Task task = srl ? Task::SRL : Task::ORL;
    const std::string tok_prefix = spec.disjoint_vocab ? (srl ? "s_" : "o_") : "";

    std::vector<std::string> fillers;
    for (int i = 0; i < spec.vocab_size; ++i) fillers.push_back(tok_prefix + "w" + std::to_string(i));
    const std::string cue_a = tok_prefix + kCueA;
    const std::string cue_b = tok_prefix + kCueB;

    RngStream rng(spec.seed, "synth/" + pattern_name(spec.pattern));
    SynthCorpus corpus;
    corpus.manifest = spec;
    corpus.vocabulary = fillers;
    corpus.vocabulary.push_back(cue_a);
    corpus.vocabulary.push_back(cue_b);

    for (int i = 0; i < spec.n_sentences; ++i) {
        const int len = spec.min_len +
                        static_cast<int>(rng.next_below(
                            static_cast<std::uint64_t>(spec.max_len - spec.min_len + 1)));
        // cue occupies one token; left role is a single token, right role 1-2
        // (clamped so everything fits in short sentences)
        const int right_len = std::min(1 + static_cast<int>(rng.next_below(2)), len - 2);
        // need >= 1 token left of the cue and right_len tokens after it
        const int cue_lo = 1;
        const int cue_hi = len - 1 - right_len;
        const int cue = cue_lo + static_cast<int>(rng.next_below(
                                     static_cast<std::uint64_t>(cue_hi - cue_lo + 1)));

        // alternate cue lexemes so corpora stay exactly balanced
        const bool use_cue_a = (i % 2 == 0);

        auto sentence = std::make_shared<Sentence>();
        sentence->doc_id = "doc" + std::to_string(i / 10);
        sentence->sent_id = i;
        for (int t = 0; t < len; ++t) {
            sentence->tokens.push_back(
                fillers[rng.next_below(static_cast<std::uint64_t>(fillers.size()))]);
        }
        sentence->tokens[static_cast<std::size_t>(cue)] = use_cue_a ? cue_a : cue_b;

        const Span left{cue - 1, cue - 1};
        const Span right{cue + 1, cue + right_len};
        std::vector<RoleSpan> roles;
        switch (spec.pattern) {
            case SynthPattern::HolderLeft:
                roles = {{"H", left}, {"T", right}};
                break;
            case SynthPattern::HolderRight:
                roles = {{"H", right}, {"T", left}};
                break;
            case SynthPattern::SrlA0A1:
                roles = {{"A0", left}, {"A1", right}};
                break;
            case SynthPattern::MixedMapping:
                roles = use_cue_a ? std::vector<RoleSpan>{{"H", left}, {"T", right}}
                                  : std::vector<RoleSpan>{{"H", right}, {"T", left}};
                break;
        }
        if (spec.noise_rate > 0.0 && rng.next_double() < spec.noise_rate) {
            roles.clear();  // instance kept, roles missing
        }
        corpus.instances.push_back(make_instance(sentence, task, {cue, cue}, std::move(roles),
                                                 "synth sentence " + std::to_string(i)));
    }
    return corpus;
}

std::string to_orl_json(const SynthCorpus& corpus) {
    json arr = json::array();
    for (const auto& inst : corpus.instances) {
        if (inst.task != Task::ORL) {
            throw ContractError("to_orl_json: corpus contains non-ORL instances");
        }
        json holders = json::array();
        json targets = json::array();
        for (const auto& r : inst.roles) {
            json span = {r.span.start, r.span.end};
            if (r.label == "H") holders.push_back(span);
            else if (r.label == "T") targets.push_back(span);
            else throw ContractError("to_orl_json: unexpected role label " + r.label);
        }
        arr.push_back({{"doc_id", inst.sentence->doc_id},
                       {"sent_id", inst.sentence->sent_id},
                       {"tokens", inst.sentence->tokens},
                       {"opinions", json::array({{{"expr", {inst.trigger.start, inst.trigger.end}},
                                                  {"holders", holders},
                                                  {"targets", targets}}})}});
    }
    return arr.dump(2);
}

std::string to_srl_columns(const SynthCorpus& corpus) {
    std::ostringstream os;
    for (const auto& inst : corpus.instances) {
        if (inst.task != Task::SRL) {
            throw ContractError("to_srl_columns: corpus contains non-SRL instances");
        }
        const int len = inst.length();
        // one predicate per sentence -> one role column in span notation
        std::vector<std::string> col(static_cast<std::size_t>(len), "*");
        for (const auto& r : inst.roles) {
            for (int t = r.span.start; t <= r.span.end; ++t) {
                std::string cell;
                if (t == r.span.start) cell += "(" + r.label;
                cell += "*";
                if (t == r.span.end) cell += ")";
                col[static_cast<std::size_t>(t)] = cell;
            }
        }
        for (int t = 0; t < len; ++t) {
            os << inst.sentence->tokens[static_cast<std::size_t>(t)] << " "
               << (t == inst.trigger.start ? "pred.01" : "-") << " "
               << col[static_cast<std::size_t>(t)] << "\n";
        }
        os << "\n";
    }
    return os.str();
}

std::string make_embedding_file(const std::vector<std::string>& words, int dim,
                                std::uint64_t seed) {
    std::ostringstream os;
    char buf[32];
    for (const auto& w : words) {
        RngStream rng(seed, "emb/" + w);
        os << w;
        for (int i = 0; i < dim; ++i) {
            std::snprintf(buf, sizeof(buf), " %.6f", rng.next_double() - 0.5);
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

std::string manifest_json(const SynthSpec& spec) {
    const json j = {{"n_sentences", spec.n_sentences}, {"vocab_size", spec.vocab_size},
                    {"min_len", spec.min_len},         {"max_len", spec.max_len},
                    {"pattern", pattern_name(spec.pattern)}, {"noise_rate", spec.noise_rate},
                    {"seed", spec.seed},               {"disjoint_vocab", spec.disjoint_vocab}};
    return j.dump(2);
}

SynthSpec manifest_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("synth manifest: ") + e.what());
    }
    SynthSpec spec;
    try {
        spec.n_sentences = j.at("n_sentences").get<int>();
        spec.vocab_size = j.at("vocab_size").get<int>();
        spec.min_len = j.at("min_len").get<int>();
        spec.max_len = j.at("max_len").get<int>();
        spec.pattern = pattern_from_name(j.at("pattern").get<std::string>());
        spec.noise_rate = j.at("noise_rate").get<double>();
        spec.seed = j.at("seed").get<std::uint64_t>();
        spec.disjoint_vocab = j.value("disjoint_vocab", false);
    } catch (const json::exception& e) {
        throw ParseError(std::string("synth manifest: ") + e.what());
    }
    spec.validate();
    return spec;
}

}  // namespace seqlab
