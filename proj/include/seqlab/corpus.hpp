#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seqlab/tensor.hpp"

namespace seqlab {

enum class Task { SRL, ORL };

std::string task_name(Task t);
Task task_from_name(const std::string& s);

/// Inclusive token-index span.
struct Span {
    int start = 0;
    int end = 0;

    int length() const { return end - start + 1; }
    bool overlaps(const Span& o) const { return start <= o.end && o.start <= end; }
    bool operator==(const Span& o) const = default;
};

struct RoleSpan {
    std::string label;
    Span span;

    bool operator==(const RoleSpan& o) const = default;
};

struct Sentence {
    std::string doc_id;
    int sent_id = 0;
    std::vector<std::string> tokens;
};

/// One sentence paired with one trigger (predicate or opinion expression)
/// and its gold role spans; the atomic training/eval unit. Tags are the BIO
/// encoding of the role spans (trigger tokens stay "O"; the trigger is
/// signalled to the model through input features instead).
struct RoleInstance {
    std::shared_ptr<const Sentence> sentence;
    Task task = Task::ORL;
    Span trigger;
    std::vector<RoleSpan> roles;
    std::vector<std::string> tags;

    int length() const { return static_cast<int>(sentence->tokens.size()); }
};

/// Validates span invariants and derives tags. Throws IngestError naming
/// `where` on violation (out-of-range span, role/role or role/trigger
/// overlap).
RoleInstance make_instance(std::shared_ptr<const Sentence> sentence, Task task, Span trigger,
                           std::vector<RoleSpan> roles, const std::string& where);

// ---------------------------------------------------------------------------
// BIO encoding

std::vector<std::string> encode_bio(const std::vector<RoleSpan>& spans, int length);
/// Lenient decode: an I-X without a live X span opens a new one.
std::vector<RoleSpan> decode_bio(const std::vector<std::string>& tags);

// ---------------------------------------------------------------------------
// Label schemes

struct LabelScheme {
    Task task = Task::ORL;
    std::vector<std::string> tags;  // position = tag id

    int size() const { return static_cast<int>(tags.size()); }
    int index_of(const std::string& tag) const;  // throws ContractError if absent
    int o_index() const { return index_of("O"); }
};

/// {O, B-H, I-H, B-T, I-T, B-DSE, I-DSE}. The DSE tags are reserved output
/// tags for opinion-expression tokens; gold instances never use them.
LabelScheme orl_label_scheme();
/// O plus B-/I- pairs for each role label, in the given order.
LabelScheme make_label_scheme(Task task, const std::vector<std::string>& role_labels);
/// Role labels observed in instance gold spans, first-occurrence order.
std::vector<std::string> collect_role_labels(const std::vector<RoleInstance>& instances);
/// Throws ContractError on a malformed scheme (missing O, I-X without B-X,
/// ORL scheme not of size 7).
void validate_scheme(const LabelScheme& scheme);

std::vector<int> tags_to_ids(const std::vector<std::string>& tags, const LabelScheme& scheme);
std::vector<std::string> ids_to_tags(const std::vector<int>& ids, const LabelScheme& scheme);

// ---------------------------------------------------------------------------
// Parsers

/// CoNLL-style column text: one token per line; blank line between
/// sentences; field 1 = token, field 2 = predicate sense or "-", fields 3..
/// one role column per predicate, either span notation "(A0*" ... "*)" or
/// plain BIO. "(V*" spans mark the predicate itself and are not role spans.
std::vector<RoleInstance> parse_srl_columns(const std::string& text);

/// JSON array of {doc_id, sent_id, tokens, opinions:[{expr, holders,
/// targets, attitude?}]}; spans are [start, end] token indices. Opinions
/// without roles are kept (all-O tags).
std::vector<RoleInstance> parse_orl_json(const std::string& text);

std::string read_text_file(const std::string& path);

// ---------------------------------------------------------------------------
// Windowing

struct WindowStats {
    int windowed_instances = 0;
    int dropped_roles = 0;
    int clipped_roles = 0;
};

/// Sentences longer than max_len are cropped to the trigger plus `radius`
/// tokens each side (clamped); spans are re-indexed, roles fully outside the
/// window are dropped, partially covered roles are clipped. Drops/clips are
/// reported through `stats`, never silent.
RoleInstance window_instance(const RoleInstance& inst, int max_len = 150, int radius = 15,
                             WindowStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Vocabulary and embeddings

class Vocabulary {
public:
    static constexpr const char* kUnkToken = "<unk>";

    Vocabulary();
    explicit Vocabulary(const std::vector<std::string>& tokens_in_order);

    int size() const { return static_cast<int>(tokens_.size()); }
    int unk_index() const { return unk_index_; }
    int lookup(const std::string& token) const;  // unk_index for OOV
    const std::string& token(int index) const { return tokens_[static_cast<std::size_t>(index)]; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    void add(const std::string& token);

private:
    std::vector<std::string> tokens_;
    std::map<std::string, int> index_;
    int unk_index_ = 0;
};

/// All words from the training instances of every task, first-occurrence
/// order, UNK first.
Vocabulary build_vocab(const std::vector<const std::vector<RoleInstance>*>& instance_sets);

struct EmbeddingMatrix {
    int dim = 0;
    Tensor rows;  // [vocab, dim]

    const double* vector_of(int index) const { return rows.data() + index * dim; }
};

/// Text format: one "word v1 ... v_dim" line per word. Vocabulary words
/// missing from the file share the UNK vector, the mean of all file vectors.
EmbeddingMatrix parse_embeddings(const std::string& text, const Vocabulary& vocab, int dim);
EmbeddingMatrix load_embeddings(const std::string& path, const Vocabulary& vocab, int dim);

// ---------------------------------------------------------------------------
// Cross-validation folds

struct CVFold {
    std::vector<std::string> train_doc_ids;
    std::vector<std::string> test_doc_ids;
};

struct CVPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> dev_doc_ids;
    std::vector<CVFold> folds;
};

/// Deterministic in (doc_ids, k, dev_count, seed): seeded shuffle, first
/// dev_count docs become the fixed dev set, the rest are partitioned into k
/// test folds.
CVPlan make_folds(const std::vector<std::string>& doc_ids, int k, int dev_count,
                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Batching

struct PaddedBatch {
    Task task = Task::ORL;
    int rows = 0;
    int max_len = 0;
    std::vector<int> token_ids;     // [rows, max_len]
    std::vector<int> tag_ids;       // [rows, max_len]; padding carries the O id
    std::vector<std::uint8_t> mask; // [rows, max_len]; 1 = real token
    std::vector<Span> trigger_spans;
    std::vector<int> lengths;
    std::vector<int> instance_indices;  // into the source instance list
};

/// One epoch: seeded shuffle, then sequential chunks (last may be short).
std::vector<PaddedBatch> make_batches(const std::vector<RoleInstance>& instances,
                                      const LabelScheme& scheme, const Vocabulary& vocab,
                                      int batch_size, std::uint64_t seed);

}  // namespace seqlab
