#include "tokmine/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace tokmine {

std::string_view to_string(TaxonomyOperation op) {
    switch (op) {
        case TaxonomyOperation::Add: return "add";
        case TaxonomyOperation::Replace: return "replace";
        case TaxonomyOperation::Remove: return "remove";
        case TaxonomyOperation::Multi: return "multi";
        case TaxonomyOperation::No: return "no";
    }
    return "no";
}

std::string_view to_string(TaxonomyTarget target) {
    switch (target) {
        case TaxonomyTarget::Identifier: return "identifier";
        case TaxonomyTarget::Statement: return "statement";
        case TaxonomyTarget::Constant: return "constant";
        case TaxonomyTarget::Declaration: return "declaration";
        case TaxonomyTarget::ControlFlow: return "control flow";
        case TaxonomyTarget::Expression: return "expression";
        case TaxonomyTarget::Multi: return "multi";
        case TaxonomyTarget::No: return "no";
    }
    return "no";
}

namespace {

bool is_functional(TokenType type) {
    switch (type) {
        case TokenType::Name:
        case TokenType::Literal:
        case TokenType::Operator:
        case TokenType::Specifier:
        case TokenType::Directive:
        case TokenType::Annotation:
        case TokenType::Value:
            return true;
        default:
            return false;
    }
}

bool is_control_keyword(const std::string& text) {
    static const std::unordered_set<std::string> kSet = {
        "if", "else", "for", "while", "do", "switch", "case",
        "default", "break", "continue", "return", "goto"};
    return kSet.count(text) > 0;
}

// Builtin type heads: a changed name from this set is a type change, which
// the coding rules send to declaration rather than identifier.
bool is_builtin_type(const std::string& text) {
    static const std::unordered_set<std::string> kSet = {
        "void", "int", "char", "short", "long", "float", "double", "signed",
        "unsigned", "bool", "_Bool", "boolean", "byte", "size_t", "ssize_t",
        "int8_t", "int16_t", "int32_t", "int64_t",
        "uint8_t", "uint16_t", "uint32_t", "uint64_t",
        "u8", "u16", "u32", "u64", "s8", "s16", "s32", "s64"};
    return kSet.count(text) > 0;
}

struct Region {
    std::vector<Token> removed;
    std::vector<Token> added;
    std::set<int> old_lines;  // pre-image lines of removed tokens
    std::set<int> new_lines;  // post-image lines of added tokens
};

struct RegionLabel {
    TaxonomyOperation op;
    TaxonomyTarget target;
    double confidence;
};

// Token hunks that touch a common source line (on the same side of the diff)
// belong to one edited region; a single edited line frequently splits into
// several minimal hunks which must not count as separate activities. Old and
// new line numbers are never compared with each other since the images drift
// apart.
std::vector<Region> fuse_hunks(const DiffResult<Token>& diff) {
    std::vector<Region> regions;
    for (const Hunk<Token>& hunk : diff.hunks) {
        std::set<int> old_lines, new_lines;
        for (const Token& t : hunk.removed) old_lines.insert(t.line);
        for (const Token& t : hunk.added) new_lines.insert(t.line);

        const auto shares_line = [](const std::set<int>& a, const std::set<int>& b) {
            for (int line : a)
                if (b.count(line)) return true;
            return false;
        };
        if (!regions.empty() && (shares_line(regions.back().old_lines, old_lines) ||
                                 shares_line(regions.back().new_lines, new_lines))) {
            Region& region = regions.back();
            region.removed.insert(region.removed.end(), hunk.removed.begin(),
                                  hunk.removed.end());
            region.added.insert(region.added.end(), hunk.added.begin(), hunk.added.end());
            region.old_lines.insert(old_lines.begin(), old_lines.end());
            region.new_lines.insert(new_lines.begin(), new_lines.end());
        } else {
            Region region;
            region.removed = hunk.removed;
            region.added = hunk.added;
            region.old_lines = std::move(old_lines);
            region.new_lines = std::move(new_lines);
            regions.push_back(std::move(region));
        }
    }
    return regions;
}

RegionLabel label_region(const Region& region) {
    const TaxonomyOperation op = region.removed.empty() ? TaxonomyOperation::Add
                                 : region.added.empty() ? TaxonomyOperation::Remove
                                                        : TaxonomyOperation::Replace;
    std::vector<const Token*> changed;
    for (const Token& t : region.removed) changed.push_back(&t);
    for (const Token& t : region.added) changed.push_back(&t);

    bool any_functional = false;
    bool all_names = true;
    bool all_constants = true;
    bool control_kw = false;
    bool builtin_type = false;
    bool specifier = false;
    bool define_directive = false;
    bool other_directive = false;
    bool terminator = false;
    for (const Token* t : changed) {
        any_functional = any_functional || is_functional(t->type);
        all_names = all_names && t->type == TokenType::Name;
        all_constants = all_constants &&
                        (t->type == TokenType::Literal || t->type == TokenType::Value);
        if (t->type == TokenType::Name) {
            control_kw = control_kw || is_control_keyword(t->text);
            builtin_type = builtin_type || is_builtin_type(t->text);
        }
        specifier = specifier || t->type == TokenType::Specifier;
        if (t->type == TokenType::Directive) {
            if (t->text == "#define") define_directive = true;
            else other_directive = true;
        }
        terminator = terminator ||
                     t->type == TokenType::ExprStmt || t->type == TokenType::DeclStmt;
    }

    if (!any_functional) return {TaxonomyOperation::No, TaxonomyTarget::No, 1.0};
    if (control_kw) return {op, TaxonomyTarget::ControlFlow, 1.0};
    if (all_names)
        return {op, builtin_type ? TaxonomyTarget::Declaration : TaxonomyTarget::Identifier, 1.0};
    if (all_constants) return {op, TaxonomyTarget::Constant, 1.0};
    if (specifier || define_directive || builtin_type)
        return {op, TaxonomyTarget::Declaration, 1.0};
    if (terminator || other_directive) return {op, TaxonomyTarget::Statement, 1.0};
    return {op, TaxonomyTarget::Expression, 0.5};
}

// A commit whose removed lines are exactly its added lines in another order
// moves statements around; minimal token diffs degenerate on such commits, so
// they are recognized up front from the line diff.
bool is_pure_line_reorder(const CommitRecord& record) {
    std::multiset<std::string> removed, added;
    for (const FileChange& file : record.files) {
        for (const auto& hunk : file.line_diff.hunks) {
            for (const LineUnit& u : hunk.removed) removed.insert(u.key);
            for (const LineUnit& u : hunk.added) added.insert(u.key);
        }
    }
    return !removed.empty() && removed == added;
}

}  // namespace

TaxonomyLabel classify_taxonomy(const CommitRecord& record, const DetectorConfig& config) {
    if (!detect_micro(record, config))
        throw std::invalid_argument("taxonomy rules apply to micro commits only: " +
                                    record.commit_id);

    if (is_pure_line_reorder(record)) {
        TaxonomyLabel label;
        label.operation = TaxonomyOperation::Multi;
        label.target = TaxonomyTarget::Multi;
        label.confidence = 1.0;
        label.constituents = {{TaxonomyOperation::Remove, TaxonomyTarget::Statement},
                              {TaxonomyOperation::Add, TaxonomyTarget::Statement}};
        return label;
    }

    std::vector<RegionLabel> labels;
    for (const FileChange& file : record.files) {
        for (const Region& region : fuse_hunks(file.token_diff))
            labels.push_back(label_region(region));
    }

    if (labels.empty()) return {TaxonomyOperation::No, TaxonomyTarget::No, 1.0, {}};

    // functionally empty regions do not count as activities unless there is
    // nothing else
    std::vector<RegionLabel> active;
    for (const RegionLabel& l : labels)
        if (l.op != TaxonomyOperation::No) active.push_back(l);
    if (active.empty()) return {TaxonomyOperation::No, TaxonomyTarget::No, 1.0, {}};

    std::vector<std::pair<TaxonomyOperation, TaxonomyTarget>> distinct;
    double confidence = 1.0;
    for (const RegionLabel& l : active) {
        confidence = std::min(confidence, l.confidence);
        const auto pair = std::make_pair(l.op, l.target);
        if (std::find(distinct.begin(), distinct.end(), pair) == distinct.end())
            distinct.push_back(pair);
    }

    TaxonomyLabel label;
    label.confidence = confidence;
    if (distinct.size() == 1) {
        label.operation = distinct[0].first;
        label.target = distinct[0].second;
    } else {
        label.operation = TaxonomyOperation::Multi;
        label.target = TaxonomyTarget::Multi;
        label.constituents = std::move(distinct);
    }
    return label;
}

std::vector<GoldRow> load_gold_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read gold label file: " + path);
    std::vector<GoldRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    field += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else {
                field += c;
            }
        }
        fields.push_back(std::move(field));
        if (first && fields.size() >= 1 && fields[0] == "commit_id") {
            first = false;
            continue;  // header row
        }
        first = false;
        if (fields.size() < 3)
            throw std::runtime_error("gold CSV rows need commit_id, operation, target");
        rows.push_back({fields[0], fields[1], fields[2]});
    }
    return rows;
}

}  // namespace tokmine
