#include "csd/io.hpp"

#include "csd/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace csd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
    if (line.size() < keyword.size()) {
        return false;
    }
    if (lower(line.substr(0, keyword.size())) != keyword) {
        return false;
    }
    return line.size() == keyword.size() || std::isspace(static_cast<unsigned char>(line[keyword.size()]));
}

/// Strips one level of single or double quotes.
std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        std::string out;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            if (s[i] == '\\' && i + 2 < s.size()) {
                ++i;
            }
            out.push_back(s[i]);
        }
        return out;
    }
    return std::string(s);
}

/// Splits on commas that are outside quotes.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    char quote = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote != 0) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(line.substr(start)));
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

bool parse_number(std::string_view token, double &out) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    if (token.empty()) {
        return false;
    }
    const auto *first = token.data();
    const auto *last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool is_missing(std::string_view token) { return token == "?" || token.empty(); }

bool is_true_token(std::string_view token) {
    const auto t = lower(token);
    return t == "true" || t == "yes" || t == "1";
}

bool is_false_token(std::string_view token) {
    const auto t = lower(token);
    return t == "false" || t == "no" || t == "0";
}

enum class AttributeKind { numeric, nominal };

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<std::string> values;
};

std::string quote_name(const std::string &name) {
    const bool needs = name.empty() || std::any_of(name.begin(), name.end(), [](unsigned char c) {
                           return std::isspace(c) || c == ',' || c == '\'' || c == '"' || c == '{' || c == '}' ||
                                  c == '%' || c == '\\';
                       });
    if (!needs) {
        return name;
    }
    std::string out = "'";
    for (char c : name) {
        if (c == '\'' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

/// Splits "@attribute <name> <type>" into name and type text.
std::pair<std::string, std::string_view> split_declaration(std::string_view rest, std::size_t line_no) {
    rest = trim(rest);
    if (rest.empty()) {
        throw ParseError("attribute declaration without a name", line_no);
    }
    std::size_t end = 0;
    if (rest.front() == '\'' || rest.front() == '"') {
        const char q = rest.front();
        end = 1;
        while (end < rest.size() && rest[end] != q) {
            end += rest[end] == '\\' ? 2 : 1;
        }
        if (end >= rest.size()) {
            throw ParseError("unterminated quoted attribute name", line_no);
        }
        ++end;
    } else {
        while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end])) && rest[end] != '{') {
            ++end;
        }
    }
    return {unquote(rest.substr(0, end)), trim(rest.substr(end))};
}

Attribute parse_attribute(std::string_view rest, std::size_t line_no) {
    auto [name, type] = split_declaration(rest, line_no);
    Attribute attr;
    attr.name = std::move(name);
    if (type.empty()) {
        throw ParseError("attribute '" + attr.name + "' has no type", line_no);
    }
    if (type.front() == '{') {
        if (type.back() != '}') {
            throw ParseError("unterminated nominal value list for '" + attr.name + "'", line_no);
        }
        attr.kind = AttributeKind::nominal;
        for (auto v : split_fields(type.substr(1, type.size() - 2))) {
            attr.values.push_back(unquote(v));
        }
        return attr;
    }
    const auto t = lower(type);
    if (t == "numeric" || t == "real" || t == "integer") {
        attr.kind = AttributeKind::numeric;
        return attr;
    }
    throw SchemaError("attribute '" + attr.name + "' has unsupported type '" + std::string(type) + "'");
}

/// Resolves, for a nominal label attribute, which value means "smelly".
std::string positive_nominal(const Attribute &attr, const ParseOptions &options) {
    if (options.positive_value) {
        if (std::find(attr.values.begin(), attr.values.end(), *options.positive_value) == attr.values.end()) {
            throw SchemaError("positive value '" + *options.positive_value + "' is not declared for label '" +
                              attr.name + "'");
        }
        return *options.positive_value;
    }
    for (const auto &v : attr.values) {
        if (is_true_token(v)) {
            return v;
        }
    }
    throw SchemaError("cannot tell the positive value of label '" + attr.name +
                      "'; configure positive_value explicitly");
}

struct Builder {
    std::vector<std::string> names;
    std::vector<bool> is_label;
    std::vector<std::vector<double>> feature_cols;
    std::vector<std::vector<std::uint8_t>> label_cols;
    std::vector<std::size_t> slot; // column -> index into feature_cols or label_cols

    void init(const std::vector<std::string> &column_names, const std::vector<std::string> &label_names) {
        names = column_names;
        std::unordered_set<std::string> known(names.begin(), names.end());
        for (const auto &l : label_names) {
            if (!known.count(l)) {
                throw SchemaError("unknown label column '" + l + "'");
            }
        }
        std::unordered_set<std::string> labels(label_names.begin(), label_names.end());
        std::size_t nf = 0;
        std::size_t nl = 0;
        for (const auto &n : names) {
            const bool label = labels.count(n) > 0;
            is_label.push_back(label);
            slot.push_back(label ? nl++ : nf++);
        }
        feature_cols.resize(nf);
        label_cols.resize(nl);
    }

    TabularDataset finish(std::string name) {
        const std::size_t rows = label_cols.empty() ? (feature_cols.empty() ? 0 : feature_cols[0].size())
                                                    : label_cols[0].size();
        std::vector<double> data;
        data.reserve(rows * feature_cols.size());
        std::vector<std::string> fnames;
        std::vector<std::string> lnames;
        for (std::size_t c = 0; c < names.size(); ++c) {
            (is_label[c] ? lnames : fnames).push_back(names[c]);
        }
        for (auto &col : feature_cols) {
            data.insert(data.end(), col.begin(), col.end());
        }
        return {std::move(name), std::move(fnames), FeatureMatrix(rows, feature_cols.size(), std::move(data)),
                std::move(lnames), std::move(label_cols)};
    }
};

} // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

TabularDataset parse_arff(std::string_view text, const ParseOptions &options) {
    const auto lines = split_lines(text);
    std::string relation;
    std::vector<Attribute> attrs;
    std::size_t i = 0;
    bool in_data = false;
    for (; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty() || line.front() == '%') {
            continue;
        }
        if (starts_with_keyword(line, "@relation")) {
            relation = unquote(line.substr(9));
        } else if (starts_with_keyword(line, "@attribute")) {
            attrs.push_back(parse_attribute(line.substr(10), i + 1));
        } else if (starts_with_keyword(line, "@data")) {
            in_data = true;
            ++i;
            break;
        } else {
            throw ParseError("unexpected header line '" + std::string(line) + "'", i + 1);
        }
    }
    if (!in_data) {
        throw ParseError("missing @data section", lines.size());
    }

    std::vector<std::string> names;
    for (const auto &a : attrs) {
        names.push_back(a.name);
    }
    Builder b;
    b.init(names, options.label_names);

    std::vector<std::string> positive(attrs.size());
    for (std::size_t c = 0; c < attrs.size(); ++c) {
        if (attrs[c].kind == AttributeKind::nominal) {
            if (!b.is_label[c]) {
                throw SchemaError("nominal attribute '" + attrs[c].name + "' is not a label; features must be numeric");
            }
            positive[c] = positive_nominal(attrs[c], options);
        }
    }

    std::size_t row = 0;
    for (; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty() || line.front() == '%') {
            continue;
        }
        if (line.front() == '{') {
            throw ParseError("sparse ARFF rows are not supported", i + 1);
        }
        const auto fields = split_fields(line);
        if (fields.size() != attrs.size()) {
            throw ParseError("expected " + std::to_string(attrs.size()) + " values, found " +
                                 std::to_string(fields.size()),
                             i + 1);
        }
        for (std::size_t c = 0; c < attrs.size(); ++c) {
            const auto token = fields[c];
            if (is_missing(token)) {
                throw MissingValueError(row, attrs[c].name);
            }
            if (attrs[c].kind == AttributeKind::nominal) {
                const auto value = unquote(token);
                if (std::find(attrs[c].values.begin(), attrs[c].values.end(), value) == attrs[c].values.end()) {
                    throw ParseError("value '" + value + "' is not declared for '" + attrs[c].name + "'", i + 1);
                }
                b.label_cols[b.slot[c]].push_back(value == positive[c] ? 1 : 0);
                continue;
            }
            double v = 0.0;
            if (!parse_number(token, v)) {
                throw ParseError("non-numeric value '" + std::string(token) + "' for '" + attrs[c].name + "'",
                                 i + 1);
            }
            if (b.is_label[c]) {
                if (v != 0.0 && v != 1.0) {
                    throw SchemaError("numeric label '" + attrs[c].name + "' holds " + std::string(token) +
                                      " on line " + std::to_string(i + 1) + "; only 0 and 1 are allowed");
                }
                b.label_cols[b.slot[c]].push_back(v == 1.0 ? 1 : 0);
            } else {
                b.feature_cols[b.slot[c]].push_back(v);
            }
        }
        ++row;
    }
    return b.finish(relation);
}

TabularDataset parse_arff(std::string_view text, const std::vector<std::string> &label_names) {
    ParseOptions options;
    options.label_names = label_names;
    return parse_arff(text, options);
}

TabularDataset parse_csv(std::string_view text, const ParseOptions &options, bool has_header) {
    auto lines = split_lines(text);
    while (!lines.empty() && trim(lines.back()).empty()) {
        lines.pop_back();
    }
    std::vector<std::string> names;
    std::size_t first = 0;
    if (has_header) {
        if (lines.empty()) {
            throw ParseError("missing header row", 1);
        }
        for (auto f : split_fields(lines[0])) {
            names.push_back(unquote(f));
        }
        first = 1;
    } else if (!lines.empty()) {
        const auto n = split_fields(lines[0]).size();
        for (std::size_t c = 0; c < n; ++c) {
            names.push_back("f" + std::to_string(c + 1));
        }
    }
    Builder b;
    b.init(names, options.label_names);

    std::size_t row = 0;
    for (std::size_t i = first; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != names.size()) {
            throw ParseError("expected " + std::to_string(names.size()) + " values, found " +
                                 std::to_string(fields.size()),
                             i + 1);
        }
        for (std::size_t c = 0; c < names.size(); ++c) {
            const auto token = fields[c];
            if (is_missing(token)) {
                throw MissingValueError(row, names[c]);
            }
            if (b.is_label[c]) {
                const auto value = unquote(token);
                std::uint8_t bit = 0;
                if (options.positive_value) {
                    bit = value == *options.positive_value ? 1 : 0;
                } else if (is_true_token(value)) {
                    bit = 1;
                } else if (!is_false_token(value)) {
                    throw SchemaError("label '" + names[c] + "' holds '" + value + "' on line " +
                                      std::to_string(i + 1) + "; configure positive_value explicitly");
                }
                b.label_cols[b.slot[c]].push_back(bit);
                continue;
            }
            double v = 0.0;
            if (!parse_number(token, v)) {
                throw ParseError("non-numeric value '" + std::string(token) + "' for '" + names[c] + "'", i + 1);
            }
            b.feature_cols[b.slot[c]].push_back(v);
        }
        ++row;
    }
    return b.finish(options.name);
}

TabularDataset parse_csv(std::string_view text, const std::vector<std::string> &label_names, bool has_header) {
    ParseOptions options;
    options.label_names = label_names;
    return parse_csv(text, options, has_header);
}

std::string write_arff(const TabularDataset &d) {
    std::string out;
    out += "@relation " + quote_name(d.name().empty() ? std::string("dataset") : d.name()) + "\n\n";
    for (const auto &n : d.feature_names()) {
        out += "@attribute " + quote_name(n) + " numeric\n";
    }
    for (const auto &n : d.label_names()) {
        out += "@attribute " + quote_name(n) + " {0,1}\n";
    }
    out += "\n@data\n";
    const auto &x = d.features();
    for (std::size_t r = 0; r < d.n_instances(); ++r) {
        bool first = true;
        for (std::size_t c = 0; c < d.n_features(); ++c) {
            if (!first) {
                out += ',';
            }
            out += format_double(x(r, c));
            first = false;
        }
        for (std::size_t l = 0; l < d.n_labels(); ++l) {
            if (!first) {
                out += ',';
            }
            out += d.label(l)[r] ? '1' : '0';
            first = false;
        }
        out += '\n';
    }
    return out;
}

std::string write_csv(const TabularDataset &d) {
    std::string out;
    bool first = true;
    auto add_name = [&](const std::string &n) {
        if (n.find_first_of(",\n\r\"'") != std::string::npos) {
            throw SchemaError("column name '" + n + "' cannot be written to CSV");
        }
        if (!first) {
            out += ',';
        }
        out += n;
        first = false;
    };
    for (const auto &n : d.feature_names()) {
        add_name(n);
    }
    for (const auto &n : d.label_names()) {
        add_name(n);
    }
    out += '\n';
    const auto &x = d.features();
    for (std::size_t r = 0; r < d.n_instances(); ++r) {
        first = true;
        for (std::size_t c = 0; c < d.n_features(); ++c) {
            if (!first) {
                out += ',';
            }
            out += format_double(x(r, c));
            first = false;
        }
        for (std::size_t l = 0; l < d.n_labels(); ++l) {
            if (!first) {
                out += ',';
            }
            out += d.label(l)[r] ? '1' : '0';
            first = false;
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> arff_nominal_attributes(std::string_view text) {
    std::vector<std::string> out;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (starts_with_keyword(line, "@data")) {
            break;
        }
        if (starts_with_keyword(line, "@attribute")) {
            auto [name, type] = split_declaration(line.substr(10), i + 1);
            if (!type.empty() && type.front() == '{') {
                out.push_back(name);
            }
        }
    }
    return out;
}

std::vector<std::string> column_names(const std::filesystem::path &path) {
    const auto text = read_text_file(path);
    const auto lines = split_lines(text);
    std::vector<std::string> out;
    if (path.extension() == ".csv") {
        for (const auto &line : lines) {
            if (!trim(line).empty()) {
                for (auto field : split_fields(line)) {
                    out.push_back(unquote(trim(field)));
                }
                break;
            }
        }
        return out;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (starts_with_keyword(line, "@data")) {
            break;
        }
        if (starts_with_keyword(line, "@attribute")) {
            out.push_back(split_declaration(line.substr(10), i + 1).first);
        }
    }
    return out;
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

TabularDataset load_dataset(const std::filesystem::path &path, ParseOptions options) {
    const auto text = read_text_file(path);
    if (path.extension() == ".csv") {
        if (options.name.empty()) {
            options.name = path.stem().string();
        }
        return parse_csv(text, options, true);
    }
    if (options.label_names.empty()) {
        options.label_names = arff_nominal_attributes(text);
    }
    return parse_arff(text, options);
}

void save_dataset(const std::filesystem::path &path, const TabularDataset &d) {
    write_text_file(path, path.extension() == ".csv" ? write_csv(d) : write_arff(d));
}

} // namespace csd
