#include "lieforge/serialize.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace lieforge {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::size_t as_index(const json& v, std::size_t dim, const char* what) {
    if (!v.is_number_unsigned()) throw InvalidInput(std::string("expected a non-negative integer for ") + what);
    auto i = v.get<std::size_t>();
    if (i >= dim) throw InvalidInput(std::string(what) + " out of range");
    return i;
}

}  // namespace

std::string write_algebra(const LieAlgebra& a) {
    ordered_json doc;
    doc["dim"] = a.dim();
    auto labels = ordered_json::array();
    for (const auto& l : a.labels()) labels.push_back(l.to_string());
    doc["labels"] = std::move(labels);
    auto brackets = ordered_json::array();
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j) {
            const auto& v = a.table().upper(i, j);
            if (v.empty()) continue;
            auto terms = ordered_json::array();
            for (const auto& [k, x] : v.entries) terms.push_back(ordered_json::array({k, format_rational(x)}));
            brackets.push_back(ordered_json::array({i, j, std::move(terms)}));
        }
    doc["brackets"] = std::move(brackets);
    return doc.dump() + "\n";
}

LieAlgebra read_algebra(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.size() != 3 || !doc.contains("dim") || !doc.contains("labels") ||
        !doc.contains("brackets"))
        throw InvalidInput("expected exactly the keys dim, labels, brackets");
    if (!doc["dim"].is_number_unsigned()) throw InvalidInput("dim must be a non-negative integer");
    const auto dim = doc["dim"].get<std::size_t>();
    const auto& jl = doc["labels"];
    if (!jl.is_array() || jl.size() != dim) throw InvalidInput("labels must be an array of length dim");
    std::vector<BasisLabel> labels;
    for (const auto& l : jl) {
        if (!l.is_string()) throw InvalidInput("labels must be strings");
        labels.push_back(BasisLabel::parse(l.get<std::string>()));
        if (labels.back().to_string() != l.get<std::string>())
            throw InvalidInput("non-canonical label '" + l.get<std::string>() + "'");
    }
    StructureTable t(dim);
    const auto& jb = doc["brackets"];
    if (!jb.is_array()) throw InvalidInput("brackets must be an array");
    std::pair<std::size_t, std::size_t> prev{0, 0};
    bool first = true;
    for (const auto& entry : jb) {
        if (!entry.is_array() || entry.size() != 3) throw InvalidInput("bracket entries are [i, j, terms]");
        std::size_t i = as_index(entry[0], dim, "i"), j = as_index(entry[1], dim, "j");
        if (i >= j) throw InvalidInput("bracket pairs need i < j");
        if (!first && std::pair{i, j} <= prev) throw InvalidInput("bracket pairs must be strictly ascending");
        first = false;
        prev = {i, j};
        const auto& terms = entry[2];
        if (!terms.is_array() || terms.empty()) throw InvalidInput("bracket terms must be a non-empty array");
        SparseVector v;
        for (const auto& term : terms) {
            if (!term.is_array() || term.size() != 2 || !term[1].is_string())
                throw InvalidInput("bracket terms are [k, \"p/q\"]");
            std::size_t k = as_index(term[0], dim, "k");
            if (!v.empty() && k <= v.entries.back().first) throw InvalidInput("targets must be strictly ascending");
            const auto s = term[1].get<std::string>();
            Rational x;
            try {
                x = parse_rational(s);
            } catch (const std::invalid_argument& e) {
                throw InvalidInput(e.what());
            }
            if (x == 0 || format_rational(x) != s) throw InvalidInput("coefficient not canonical: '" + s + "'");
            v.entries.emplace_back(k, x);
        }
        t.set(i, j, std::move(v));
    }
    return LieAlgebra(std::move(t), std::move(labels));
}

LieAlgebra load_algebra(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_algebra(ss.str());
}

void save_algebra(const LieAlgebra& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << write_algebra(a);
}

}  // namespace lieforge
