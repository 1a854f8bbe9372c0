#include "seqlab/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "seqlab/errors.hpp"
#include "seqlab/rng.hpp"

namespace seqlab {

using nlohmann::json;

std::string task_name(Task t) { return t == Task::SRL ? "srl" : "orl"; }

Task task_from_name(const std::string& s) {
    if (s == "srl" || s == "SRL") return Task::SRL;
    if (s == "orl" || s == "ORL") return Task::ORL;
    throw ContractError("unknown task: " + s);
}

// ---------------------------------------------------------------------------
// Instances

namespace {

void check_sentence(const Sentence& s, const std::string& where) {
    if (s.tokens.empty()) throw IngestError(where + ": sentence has no tokens");
    for (const auto& tok : s.tokens) {
        if (tok.empty() || tok.find_first_of(" \t\n\r") != std::string::npos) {
            throw IngestError(where + ": token contains whitespace or is empty: '" + tok + "'");
        }
    }
}

std::string span_str(const Span& s) {
    return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + "]";
}

void check_span(const Span& s, int length, const std::string& what, const std::string& where) {
    if (s.start < 0 || s.end < s.start || s.end >= length) {
        throw IngestError(where + ": " + what + " span " + span_str(s) +
                          " out of range for length " + std::to_string(length));
    }
}

}  // namespace

RoleInstance make_instance(std::shared_ptr<const Sentence> sentence, Task task, Span trigger,
                           std::vector<RoleSpan> roles, const std::string& where) {
    check_sentence(*sentence, where);
    const int len = static_cast<int>(sentence->tokens.size());
    check_span(trigger, len, "trigger", where);
    for (const auto& r : roles) {
        check_span(r.span, len, "role " + r.label, where);
        if (r.span.overlaps(trigger)) {
            throw IngestError(where + ": role " + r.label + " " + span_str(r.span) +
                              " overlaps the trigger " + span_str(trigger));
        }
    }
    for (std::size_t i = 0; i < roles.size(); ++i) {
        for (std::size_t j = i + 1; j < roles.size(); ++j) {
            if (roles[i].span.overlaps(roles[j].span)) {
                throw IngestError(where + ": overlapping roles " + roles[i].label + " " +
                                  span_str(roles[i].span) + " and " + roles[j].label + " " +
                                  span_str(roles[j].span));
            }
        }
    }
    RoleInstance inst;
    inst.sentence = std::move(sentence);
    inst.task = task;
    inst.trigger = trigger;
    inst.roles = std::move(roles);
    inst.tags = encode_bio(inst.roles, len);
    return inst;
}

// ---------------------------------------------------------------------------
// BIO

std::vector<std::string> encode_bio(const std::vector<RoleSpan>& spans, int length) {
    std::vector<std::string> tags(static_cast<std::size_t>(length), "O");
    for (const auto& r : spans) {
        if (r.span.start < 0 || r.span.end < r.span.start || r.span.end >= length) {
            throw ContractError("encode_bio: span " + span_str(r.span) +
                                " out of range for length " + std::to_string(length));
        }
        for (int i = r.span.start; i <= r.span.end; ++i) {
            if (tags[static_cast<std::size_t>(i)] != "O") {
                throw ContractError("encode_bio: overlapping spans at token " +
                                    std::to_string(i));
            }
            tags[static_cast<std::size_t>(i)] = (i == r.span.start ? "B-" : "I-") + r.label;
        }
    }
    return tags;
}

std::vector<RoleSpan> decode_bio(const std::vector<std::string>& tags) {
    std::vector<RoleSpan> spans;
    std::string open_label;
    int open_start = -1;
    auto close = [&](int end) {
        if (open_start >= 0) {
            spans.push_back({open_label, {open_start, end}});
            open_start = -1;
            open_label.clear();
        }
    };
    for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
        const std::string& t = tags[static_cast<std::size_t>(i)];
        if (t == "O") {
            close(i - 1);
        } else if (t.size() > 2 && (t[0] == 'B' || t[0] == 'I') && t[1] == '-') {
            const std::string label = t.substr(2);
            if (t[0] == 'B') {
                close(i - 1);
                open_label = label;
                open_start = i;
            } else if (open_start >= 0 && open_label == label) {
                // continue
            } else {
                // lenient: dangling I-X opens a fresh span
                close(i - 1);
                open_label = label;
                open_start = i;
            }
        } else {
            throw ContractError("decode_bio: malformed tag '" + t + "' at position " +
                                std::to_string(i));
        }
    }
    close(static_cast<int>(tags.size()) - 1);
    return spans;
}

// ---------------------------------------------------------------------------
// Label schemes

int LabelScheme::index_of(const std::string& tag) const {
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (tags[i] == tag) return static_cast<int>(i);
    }
    throw ContractError("tag not in scheme: " + tag);
}

LabelScheme orl_label_scheme() {
    LabelScheme s;
    s.task = Task::ORL;
    s.tags = {"O", "B-H", "I-H", "B-T", "I-T", "B-DSE", "I-DSE"};
    return s;
}

LabelScheme make_label_scheme(Task task, const std::vector<std::string>& role_labels) {
    LabelScheme s;
    s.task = task;
    s.tags.push_back("O");
    for (const auto& l : role_labels) {
        s.tags.push_back("B-" + l);
        s.tags.push_back("I-" + l);
    }
    return s;
}

std::vector<std::string> collect_role_labels(const std::vector<RoleInstance>& instances) {
    std::vector<std::string> labels;
    for (const auto& inst : instances) {
        for (const auto& r : inst.roles) {
            if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) {
                labels.push_back(r.label);
            }
        }
    }
    return labels;
}

void validate_scheme(const LabelScheme& scheme) {
    bool has_o = false;
    for (const auto& t : scheme.tags) {
        if (t == "O") has_o = true;
    }
    if (!has_o) throw ContractError("label scheme lacks O");
    for (const auto& t : scheme.tags) {
        if (t.size() > 2 && t[0] == 'I' && t[1] == '-') {
            const std::string b = "B-" + t.substr(2);
            if (std::find(scheme.tags.begin(), scheme.tags.end(), b) == scheme.tags.end()) {
                throw ContractError("label scheme has " + t + " without " + b);
            }
        }
    }
    if (scheme.task == Task::ORL && scheme.tags.size() != 7) {
        throw ContractError("ORL scheme must have exactly 7 tags, got " +
                            std::to_string(scheme.tags.size()));
    }
}

std::vector<int> tags_to_ids(const std::vector<std::string>& tags, const LabelScheme& scheme) {
    std::vector<int> ids;
    ids.reserve(tags.size());
    for (const auto& t : tags) ids.push_back(scheme.index_of(t));
    return ids;
}

std::vector<std::string> ids_to_tags(const std::vector<int>& ids, const LabelScheme& scheme) {
    std::vector<std::string> tags;
    tags.reserve(ids.size());
    for (int id : ids) {
        if (id < 0 || id >= scheme.size()) {
            throw ContractError("tag id out of range: " + std::to_string(id));
        }
        tags.push_back(scheme.tags[static_cast<std::size_t>(id)]);
    }
    return tags;
}

// ---------------------------------------------------------------------------
// SRL column parser

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) out.push_back(f);
    return out;
}

bool is_bio_cell(const std::string& c) {
    return c == "O" || (c.size() > 2 && (c[0] == 'B' || c[0] == 'I') && c[1] == '-');
}

// Span-notation column -> role spans. Cells: "(X*", "*", "*)", "(X*)".
std::vector<RoleSpan> parse_span_column(const std::vector<std::string>& cells,
                                        const std::vector<int>& line_numbers) {
    std::vector<RoleSpan> spans;
    std::string open_label;
    int open_start = -1;
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
        std::string c = cells[static_cast<std::size_t>(i)];
        const int line = line_numbers[static_cast<std::size_t>(i)];
        bool opens = false, closes = false;
        if (!c.empty() && c.front() == '(') {
            opens = true;
            c.erase(c.begin());
        }
        if (!c.empty() && c.back() == ')') {
            closes = true;
            c.pop_back();
        }
        if (c.empty() || c.back() != '*') {
            throw ParseError("line " + std::to_string(line) + ": bad span cell '" +
                             cells[static_cast<std::size_t>(i)] + "'");
        }
        c.pop_back();  // trailing '*'
        if (opens) {
            if (open_start >= 0) {
                throw ParseError("line " + std::to_string(line) +
                                 ": span opened inside another span");
            }
            if (c.empty()) {
                throw ParseError("line " + std::to_string(line) + ": span with empty label");
            }
            open_label = c;
            open_start = i;
        } else if (!c.empty()) {
            throw ParseError("line " + std::to_string(line) + ": unexpected label '" + c +
                             "' without '('");
        }
        if (closes) {
            if (open_start < 0) {
                throw ParseError("line " + std::to_string(line) + ": ')' without open span");
            }
            spans.push_back({open_label, {open_start, i}});
            open_start = -1;
            open_label.clear();
        }
    }
    if (open_start >= 0) {
        throw ParseError("line " + std::to_string(line_numbers.back()) +
                         ": span still open at end of sentence");
    }
    return spans;
}

}  // namespace

std::vector<RoleInstance> parse_srl_columns(const std::string& text) {
    std::vector<RoleInstance> out;
    std::vector<std::vector<std::string>> rows;  // fields per line
    std::vector<int> row_lines;
    int sent_id = 0;
    int line_no = 0;

    auto flush_sentence = [&]() {
        if (rows.empty()) return;
        const std::size_t width = rows.front().size();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != width) {
                throw ParseError("line " + std::to_string(row_lines[r]) + ": expected " +
                                 std::to_string(width) + " fields, got " +
                                 std::to_string(rows[r].size()));
            }
        }
        if (width < 2) {
            throw ParseError("line " + std::to_string(row_lines.front()) +
                             ": need at least token and predicate fields");
        }
        auto sentence = std::make_shared<Sentence>();
        sentence->doc_id = "srl";
        sentence->sent_id = sent_id;
        std::vector<int> predicate_rows;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            sentence->tokens.push_back(rows[r][0]);
            if (rows[r][1] != "-") predicate_rows.push_back(static_cast<int>(r));
        }
        const std::size_t n_cols = width - 2;
        if (n_cols != predicate_rows.size()) {
            throw ParseError("line " + std::to_string(row_lines.front()) + ": " +
                             std::to_string(predicate_rows.size()) + " predicates but " +
                             std::to_string(n_cols) + " role columns");
        }
        for (std::size_t c = 0; c < n_cols; ++c) {
            std::vector<std::string> cells;
            for (const auto& r : rows) cells.push_back(r[2 + c]);
            const bool bio = std::all_of(cells.begin(), cells.end(), is_bio_cell);
            std::vector<RoleSpan> spans =
                bio ? decode_bio(cells) : parse_span_column(cells, row_lines);
            std::vector<RoleSpan> roles;
            for (auto& s : spans) {
                if (s.label != "V") roles.push_back(std::move(s));
            }
            const int p = predicate_rows[c];
            const std::string where = "srl sentence " + std::to_string(sent_id) +
                                      " predicate " + std::to_string(c);
            out.push_back(make_instance(sentence, Task::SRL, {p, p}, std::move(roles), where));
        }
        ++sent_id;
        rows.clear();
        row_lines.clear();
    };

    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) {
            flush_sentence();
        } else {
            rows.push_back(split_fields(line));
            row_lines.push_back(line_no);
        }
    }
    flush_sentence();
    return out;
}

// ---------------------------------------------------------------------------
// ORL JSON parser

namespace {

Span parse_json_span(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
        !j[1].is_number_integer()) {
        throw IngestError(where + ": span must be [start, end] integers");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

void require_keys(const json& obj, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional, const std::string& where) {
    for (const auto& k : required) {
        if (!obj.contains(k)) throw IngestError(where + ": missing key '" + k + "'");
    }
    for (const auto& [k, v] : obj.items()) {
        if (std::find(required.begin(), required.end(), k) == required.end() &&
            std::find(optional.begin(), optional.end(), k) == optional.end()) {
            throw IngestError(where + ": unknown key '" + k + "'");
        }
    }
}

}  // namespace

std::vector<RoleInstance> parse_orl_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("orl json: ") + e.what());
    }
    if (!root.is_array()) throw IngestError("orl json: top level must be an array");

    std::vector<RoleInstance> out;
    for (std::size_t si = 0; si < root.size(); ++si) {
        const json& js = root[si];
        const std::string swhere = "orl record " + std::to_string(si);
        if (!js.is_object()) throw IngestError(swhere + ": expected an object");
        require_keys(js, {"doc_id", "sent_id", "tokens", "opinions"}, {}, swhere);
        auto sentence = std::make_shared<Sentence>();
        if (!js["doc_id"].is_string() || !js["sent_id"].is_number_integer()) {
            throw IngestError(swhere + ": doc_id must be string, sent_id integer");
        }
        sentence->doc_id = js["doc_id"].get<std::string>();
        sentence->sent_id = js["sent_id"].get<int>();
        if (!js["tokens"].is_array() || js["tokens"].empty()) {
            throw IngestError(swhere + ": tokens must be a nonempty array");
        }
        for (const auto& t : js["tokens"]) {
            if (!t.is_string()) throw IngestError(swhere + ": tokens must be strings");
            sentence->tokens.push_back(t.get<std::string>());
        }
        if (!js["opinions"].is_array()) throw IngestError(swhere + ": opinions must be an array");
        for (std::size_t oi = 0; oi < js["opinions"].size(); ++oi) {
            const json& jo = js["opinions"][oi];
            const std::string owhere = swhere + " (doc " + sentence->doc_id + " sent " +
                                       std::to_string(sentence->sent_id) + ") opinion " +
                                       std::to_string(oi);
            if (!jo.is_object()) throw IngestError(owhere + ": expected an object");
            require_keys(jo, {"expr"}, {"holders", "targets", "attitude"}, owhere);
            const Span expr = parse_json_span(jo["expr"], owhere + " expr");
            std::vector<RoleSpan> roles;
            if (jo.contains("holders")) {
                if (!jo["holders"].is_array()) throw IngestError(owhere + ": holders must be an array");
                for (const auto& h : jo["holders"])
                    roles.push_back({"H", parse_json_span(h, owhere + " holder")});
            }
            if (jo.contains("targets")) {
                if (!jo["targets"].is_array()) throw IngestError(owhere + ": targets must be an array");
                for (const auto& t : jo["targets"])
                    roles.push_back({"T", parse_json_span(t, owhere + " target")});
            }
            if (jo.contains("attitude") && !jo["attitude"].is_string()) {
                throw IngestError(owhere + ": attitude must be a string");
            }
            out.push_back(make_instance(sentence, Task::ORL, expr, std::move(roles), owhere));
        }
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Windowing

RoleInstance window_instance(const RoleInstance& inst, int max_len, int radius,
                             WindowStats* stats) {
    const int len = inst.length();
    if (len <= max_len) return inst;

    const int w_start = std::max(0, inst.trigger.start - radius);
    const int w_end = std::min(len - 1, inst.trigger.end + radius);

    auto sentence = std::make_shared<Sentence>();
    sentence->doc_id = inst.sentence->doc_id;
    sentence->sent_id = inst.sentence->sent_id;
    for (int i = w_start; i <= w_end; ++i) {
        sentence->tokens.push_back(inst.sentence->tokens[static_cast<std::size_t>(i)]);
    }

    std::vector<RoleSpan> roles;
    for (const auto& r : inst.roles) {
        if (r.span.end < w_start || r.span.start > w_end) {
            if (stats) ++stats->dropped_roles;
            continue;
        }
        RoleSpan moved = r;
        if (r.span.start < w_start || r.span.end > w_end) {
            if (stats) ++stats->clipped_roles;
        }
        moved.span.start = std::max(r.span.start, w_start) - w_start;
        moved.span.end = std::min(r.span.end, w_end) - w_start;
        roles.push_back(moved);
    }
    const Span trigger{inst.trigger.start - w_start, inst.trigger.end - w_start};
    if (stats) ++stats->windowed_instances;
    const std::string where =
        "window doc " + sentence->doc_id + " sent " + std::to_string(sentence->sent_id);
    return make_instance(sentence, inst.task, trigger, std::move(roles), where);
}

// ---------------------------------------------------------------------------
// Vocabulary & embeddings

Vocabulary::Vocabulary() {
    tokens_.push_back(kUnkToken);
    index_[kUnkToken] = 0;
    unk_index_ = 0;
}

Vocabulary::Vocabulary(const std::vector<std::string>& tokens_in_order) : Vocabulary() {
    for (const auto& t : tokens_in_order) add(t);
}

int Vocabulary::lookup(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? unk_index_ : it->second;
}

void Vocabulary::add(const std::string& token) {
    if (index_.count(token)) return;
    index_[token] = static_cast<int>(tokens_.size());
    tokens_.push_back(token);
}

Vocabulary build_vocab(const std::vector<const std::vector<RoleInstance>*>& instance_sets) {
    Vocabulary v;
    for (const auto* set : instance_sets) {
        for (const auto& inst : *set) {
            for (const auto& tok : inst.sentence->tokens) v.add(tok);
        }
    }
    return v;
}

namespace {

double parse_double_field(const std::string& s, int line_no) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

EmbeddingMatrix parse_embeddings(const std::string& text, const Vocabulary& vocab, int dim) {
    std::map<std::string, std::vector<double>> file_vectors;
    std::vector<double> sum(static_cast<std::size_t>(dim), 0.0);
    std::int64_t count = 0;

    std::istringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto fields = split_fields(line);
        if (static_cast<int>(fields.size()) != dim + 1) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(dim) + " values, got " +
                             std::to_string(fields.size() - 1));
        }
        std::vector<double> vec(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            vec[static_cast<std::size_t>(i)] =
                parse_double_field(fields[static_cast<std::size_t>(i + 1)], line_no);
            sum[static_cast<std::size_t>(i)] += vec[static_cast<std::size_t>(i)];
        }
        file_vectors[fields[0]] = std::move(vec);
        ++count;
    }

    std::vector<double> unk(static_cast<std::size_t>(dim), 0.0);
    if (count > 0) {
        for (int i = 0; i < dim; ++i)
            unk[static_cast<std::size_t>(i)] = sum[static_cast<std::size_t>(i)] /
                                               static_cast<double>(count);
    }

    EmbeddingMatrix m;
    m.dim = dim;
    m.rows = Tensor({vocab.size(), dim});
    for (int v = 0; v < vocab.size(); ++v) {
        auto it = file_vectors.find(vocab.token(v));
        const std::vector<double>& src = (it == file_vectors.end()) ? unk : it->second;
        std::copy(src.begin(), src.end(), m.rows.data() + static_cast<std::int64_t>(v) * dim);
    }
    return m;
}

EmbeddingMatrix load_embeddings(const std::string& path, const Vocabulary& vocab, int dim) {
    return parse_embeddings(read_text_file(path), vocab, dim);
}

// ---------------------------------------------------------------------------
// Folds

CVPlan make_folds(const std::vector<std::string>& doc_ids, int k, int dev_count,
                  std::uint64_t seed) {
    if (k < 2) throw ContractError("make_folds: k must be >= 2");
    if (dev_count < 0 || dev_count >= static_cast<int>(doc_ids.size())) {
        throw ContractError("make_folds: dev_count must be in [0, n_docs)");
    }
    const int remaining = static_cast<int>(doc_ids.size()) - dev_count;
    if (remaining < k) {
        throw ContractError("make_folds: too few documents (" + std::to_string(remaining) +
                            " non-dev) for k=" + std::to_string(k));
    }

    std::vector<std::string> shuffled = doc_ids;
    RngStream rng(seed, "cv_folds");
    rng.shuffle(shuffled);

    CVPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.dev_doc_ids.assign(shuffled.begin(), shuffled.begin() + dev_count);

    std::vector<std::string> pool(shuffled.begin() + dev_count, shuffled.end());
    const int base = remaining / k;
    const int extra = remaining % k;
    int pos = 0;
    std::vector<std::vector<std::string>> chunks;
    for (int f = 0; f < k; ++f) {
        const int size = base + (f < extra ? 1 : 0);
        chunks.emplace_back(pool.begin() + pos, pool.begin() + pos + size);
        pos += size;
    }
    for (int f = 0; f < k; ++f) {
        CVFold fold;
        fold.test_doc_ids = chunks[static_cast<std::size_t>(f)];
        for (int g = 0; g < k; ++g) {
            if (g == f) continue;
            fold.train_doc_ids.insert(fold.train_doc_ids.end(),
                                      chunks[static_cast<std::size_t>(g)].begin(),
                                      chunks[static_cast<std::size_t>(g)].end());
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Batching

std::vector<PaddedBatch> make_batches(const std::vector<RoleInstance>& instances,
                                      const LabelScheme& scheme, const Vocabulary& vocab,
                                      int batch_size, std::uint64_t seed) {
    if (instances.empty()) throw ContractError("make_batches: empty instance list");
    if (batch_size < 1) throw ContractError("make_batches: batch_size must be >= 1");

    std::vector<int> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    RngStream rng(seed, "batch");
    rng.shuffle(order);

    const int o_id = scheme.o_index();
    std::vector<PaddedBatch> batches;
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(batch_size));
        PaddedBatch b;
        b.rows = static_cast<int>(end - begin);
        int max_len = 0;
        for (std::size_t i = begin; i < end; ++i) {
            max_len = std::max(max_len, instances[static_cast<std::size_t>(order[i])].length());
        }
        b.max_len = max_len;
        b.token_ids.assign(static_cast<std::size_t>(b.rows * max_len), vocab.unk_index());
        b.tag_ids.assign(static_cast<std::size_t>(b.rows * max_len), o_id);
        b.mask.assign(static_cast<std::size_t>(b.rows * max_len), 0);
        for (std::size_t i = begin; i < end; ++i) {
            const int row = static_cast<int>(i - begin);
            const RoleInstance& inst = instances[static_cast<std::size_t>(order[i])];
            if (inst.task != scheme.task) {
                throw ContractError("make_batches: instance task does not match scheme task");
            }
            b.task = inst.task;
            b.lengths.push_back(inst.length());
            b.trigger_spans.push_back(inst.trigger);
            b.instance_indices.push_back(order[i]);
            const std::vector<int> tag_ids = tags_to_ids(inst.tags, scheme);
            for (int t = 0; t < inst.length(); ++t) {
                const std::size_t at = static_cast<std::size_t>(row * max_len + t);
                b.token_ids[at] = vocab.lookup(inst.sentence->tokens[static_cast<std::size_t>(t)]);
                b.tag_ids[at] = tag_ids[static_cast<std::size_t>(t)];
                b.mask[at] = 1;
            }
        }
        batches.push_back(std::move(b));
    }
    return batches;
}

}  // namespace seqlab
