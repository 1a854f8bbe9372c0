#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqlab/corpus.hpp"

namespace seqlab {

/// Positional patterns with known, learnable structure:
///   HolderLeft   ORL; holder = token left of the cue, target right of it
///   HolderRight  ORL; mirrored
///   SrlA0A1      SRL; A0 left of the cue, A1 right of it
///   MixedMapping ORL; the cue lexeme decides whether the holder sits at the
///                A0-position (left) or the A1-position (right)
enum class SynthPattern { HolderLeft, HolderRight, SrlA0A1, MixedMapping };

std::string pattern_name(SynthPattern p);
SynthPattern pattern_from_name(const std::string& s);

struct SynthSpec {
    int n_sentences = 100;
    int vocab_size = 50;
    int min_len = 5;
    int max_len = 9;
    SynthPattern pattern = SynthPattern::HolderLeft;
    double noise_rate = 0.0;  // fraction of instances stripped of roles
    std::uint64_t seed = 1;
    /// Negative control: prefix every token with the task letter so the SRL
    /// and ORL corpora share no lexical substrate.
    bool disjoint_vocab = false;

    void validate() const;
};

struct SynthCorpus {
    std::vector<RoleInstance> instances;
    SynthSpec manifest;
    std::vector<std::string> vocabulary;  // fillers + cue lexemes actually usable
};

SynthCorpus generate(const SynthSpec& spec);

/// Serializers emit the exact external formats the corpus module parses.
std::string to_orl_json(const SynthCorpus& corpus);
std::string to_srl_columns(const SynthCorpus& corpus);

/// Deterministic random embedding file covering `words`.
std::string make_embedding_file(const std::vector<std::string>& words, int dim,
                                std::uint64_t seed);

std::string manifest_json(const SynthSpec& spec);
SynthSpec manifest_from_json(const std::string& text);

}  // namespace seqlab
