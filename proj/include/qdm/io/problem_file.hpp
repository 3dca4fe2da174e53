// Copyright 2026 The qdm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON problem files; the grammar is documented in docs/problem-format.md.

#ifndef QDM_IO_PROBLEM_FILE_HPP
#define QDM_IO_PROBLEM_FILE_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdm/qdm.hpp"

namespace qdm::io {

using Json = nlohmann::ordered_json;

/// A fully validated problem: every name resolves and every operator is a
/// Hermitian matrix of the declared dimension.
struct ProblemFile {
    int dim = 0;
    Tolerances tolerances;
    std::map<std::string, HermitianOperator> operators;
    std::map<std::string, std::vector<Ket>> subspaces;
    std::map<std::string, std::vector<std::string>> assessments;
    std::set<std::string> densities;

    /// Named operator; "I" and "0" are built in.
    HermitianOperator op(const std::string& name) const {
        if (auto it = operators.find(name); it != operators.end()) return it->second;
        if (name == "I") return HermitianOperator::identity(dim);
        if (name == "0") return HermitianOperator::zero(dim);
        throw Error(ErrorKind::ValidationError, "unknown operator '" + name + "'");
    }

    /// Named assessment; "empty" is built in.
    Assessment assessment(const std::string& name) const {
        if (name == "empty" && !assessments.count(name)) return Assessment::vacuous(dim);
        auto it = assessments.find(name);
        if (it == assessments.end()) throw Error(ErrorKind::ValidationError, "unknown assessment '" + name + "'");
        std::vector<HermitianOperator> gens;
        for (const auto& g : it->second) gens.push_back(op(g));
        return Assessment(dim, std::move(gens));
    }

    Subspace subspace(const std::string& name) const {
        auto it = subspaces.find(name);
        if (it == subspaces.end()) throw Error(ErrorKind::ValidationError, "unknown subspace '" + name + "'");
        return Subspace(dim, it->second, tolerances);
    }

    /// A comma-separated list of subspace names.
    ConditioningEvent event(const std::string& names) const {
        std::vector<Subspace> parts;
        std::stringstream ss(names);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) parts.push_back(subspace(item));
        if (parts.empty()) throw Error(ErrorKind::ValidationError, "empty event");
        return ConditioningEvent(std::move(parts), tolerances);
    }

    DensityOperator density(const std::string& name) const {
        if (!densities.count(name)) throw Error(ErrorKind::ValidationError, "'" + name + "' is not declared as a density");
        return DensityOperator(op(name), tolerances);
    }
};

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void invalid(const std::string& path, const std::string& why) {
    throw Error(ErrorKind::ValidationError, path + ": " + why);
}

inline Complex parse_scalar(const Json& v, const std::string& path) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return Complex(v[0].get<double>(), v[1].get<double>());
    invalid(path, "expected [re, im] or a real number");
}

inline ComplexVector parse_vector(const Json& v, int dim, const std::string& path) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        invalid(path, "expected an array of " + std::to_string(dim) + " entries");
    ComplexVector out(dim);
    for (int k = 0; k < dim; ++k) out(k) = parse_scalar(v[k], path + "/" + std::to_string(k));
    return out;
}

inline ComplexMatrix parse_matrix(const Json& v, int dim, const std::string& path) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        invalid(path, "expected " + std::to_string(dim) + " rows");
    ComplexMatrix m(dim, dim);
    for (int j = 0; j < dim; ++j) m.row(j) = parse_vector(v[j], dim, path + "/" + std::to_string(j)).transpose();
    return m;
}

inline const Json& require_object(const Json& doc, const char* key) {
    static const Json empty = Json::object();
    if (!doc.contains(key)) return empty;
    if (!doc[key].is_object()) invalid(std::string("/") + key, "expected an object");
    return doc[key];
}

} // namespace detail

/// Parses and validates a problem document. Syntax errors raise ParseError
/// with a line and column; broken invariants raise ValidationError with the
/// JSON pointer of the offending value.
inline ProblemFile parse_problem(const std::string& text, const Tolerances& base = {}) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::string msg = e.what();
        if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
        throw Error(ErrorKind::ParseError, detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + msg);
    }
    if (!doc.is_object()) detail::invalid("", "top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "dim" && key != "operators" && key != "subspaces" && key != "assessments" && key != "densities" &&
            key != "config")
            detail::invalid("/" + key, "unknown key");

    ProblemFile pf;
    pf.tolerances = base;
    if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1)
        detail::invalid("/dim", "expected a positive integer");
    pf.dim = doc["dim"].get<int>();

    for (const auto& [key, value] : detail::require_object(doc, "config").items()) {
        if (!value.is_number()) detail::invalid("/config/" + key, "expected a number");
        if (!pf.tolerances.set(key, value.get<double>())) detail::invalid("/config/" + key, "unknown tolerance");
    }
    if (pf.dim > pf.tolerances.max_dim)
        detail::invalid("/dim", "exceeds max_dim " + std::to_string(pf.tolerances.max_dim));

    for (const auto& [name, value] : detail::require_object(doc, "operators").items()) {
        const std::string path = "/operators/" + name;
        if (name == "I" || name == "0") detail::invalid(path, "name is reserved");
        const ComplexMatrix m = detail::parse_matrix(value, pf.dim, path);
        try {
            pf.operators.emplace(name, HermitianOperator(m, pf.tolerances));
        } catch (const Error& e) {
            detail::invalid(path, std::string("hermiticity: ") + e.what());
        }
    }

    for (const auto& [name, value] : detail::require_object(doc, "subspaces").items()) {
        const std::string path = "/subspaces/" + name;
        if (!value.is_array() || value.empty()) detail::invalid(path, "expected a nonempty array of kets");
        std::vector<Ket> kets;
        for (std::size_t k = 0; k < value.size(); ++k)
            kets.emplace_back(detail::parse_vector(value[k], pf.dim, path + "/" + std::to_string(k)));
        try {
            Subspace check(pf.dim, kets, pf.tolerances);
        } catch (const Error& e) {
            detail::invalid(path, e.what());
        }
        pf.subspaces.emplace(name, std::move(kets));
    }

    for (const auto& [name, value] : detail::require_object(doc, "assessments").items()) {
        const std::string path = "/assessments/" + name;
        if (!value.is_array()) detail::invalid(path, "expected an array of operator names");
        std::vector<std::string> gens;
        for (std::size_t k = 0; k < value.size(); ++k) {
            if (!value[k].is_string()) detail::invalid(path + "/" + std::to_string(k), "expected an operator name");
            const std::string g = value[k].get<std::string>();
            if (!pf.operators.count(g) && g != "I" && g != "0")
                detail::invalid(path + "/" + std::to_string(k), "unknown operator '" + g + "'");
            gens.push_back(g);
        }
        pf.assessments.emplace(name, std::move(gens));
    }

    if (doc.contains("densities")) {
        const Json& ds = doc["densities"];
        if (!ds.is_array()) detail::invalid("/densities", "expected an array of operator names");
        for (std::size_t k = 0; k < ds.size(); ++k) {
            const std::string path = "/densities/" + std::to_string(k);
            if (!ds[k].is_string()) detail::invalid(path, "expected an operator name");
            const std::string name = ds[k].get<std::string>();
            if (!pf.operators.count(name)) detail::invalid(path, "unknown operator '" + name + "'");
            try {
                DensityOperator check(pf.operators.at(name), pf.tolerances);
            } catch (const Error& e) {
                detail::invalid(path, e.what());
            }
            pf.densities.insert(name);
        }
    }
    return pf;
}

inline ProblemFile load_problem(const std::string& path, const Tolerances& base = {}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), base);
}

namespace detail {
// Adding +0.0 turns -0.0 into 0.0 and leaves everything else unchanged.
inline Json complex_to_json(Complex z) { return Json::array({z.real() + 0.0, z.imag() + 0.0}); }
} // namespace detail

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(detail::complex_to_json(m(j, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json ket_to_json(const Ket& k) {
    Json v = Json::array();
    for (Eigen::Index j = 0; j < k.amplitudes().size(); ++j)
        v.push_back(detail::complex_to_json(k.amplitudes()(j)));
    return v;
}

namespace detail {

// Pretty-printer that keeps rows of numbers or [re, im] pairs on one line.
inline void write_compact(std::ostringstream& os, const Json& v, int indent) {
    const auto leaf = [](const Json& x) {
        return x.is_primitive() || (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number());
    };
    const std::string pad(indent + 2, ' ');
    if (v.is_object()) {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        std::size_t k = 0;
        for (const auto& [key, x] : v.items()) {
            os << pad << Json(key).dump() << ": ";
            write_compact(os, x, indent + 2);
            os << (++k < v.size() ? ",\n" : "\n");
        }
        os << std::string(indent, ' ') << "}";
    } else if (v.is_array() && !std::all_of(v.begin(), v.end(), leaf)) {
        os << "[\n";
        for (std::size_t k = 0; k < v.size(); ++k) {
            os << pad;
            write_compact(os, v[k], indent + 2);
            os << (k + 1 < v.size() ? ",\n" : "\n");
        }
        os << std::string(indent, ' ') << "]";
    } else if (v.is_array()) {
        os << "[";
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k].dump();
        os << "]";
    } else {
        os << v.dump();
    }
}

} // namespace detail

/// Writes a problem back out; parse_problem(serialize_problem(p)) describes
/// the same problem. Only tolerances that differ from `defaults` are written.
inline std::string serialize_problem(const ProblemFile& pf, const Tolerances& defaults = {}) {
    Json doc;
    doc["dim"] = pf.dim;
    Json config = Json::object();
    for (auto key : Tolerances::keys) {
        const double v = *pf.tolerances.get(key);
        if (v != *defaults.get(key)) config[std::string(key)] = v;
    }
    if (!config.empty()) doc["config"] = config;
    Json ops = Json::object();
    for (const auto& [name, op] : pf.operators) ops[name] = matrix_to_json(op.matrix());
    doc["operators"] = ops;
    Json subs = Json::object();
    for (const auto& [name, kets] : pf.subspaces) {
        Json list = Json::array();
        for (const auto& k : kets) list.push_back(ket_to_json(k));
        subs[name] = list;
    }
    doc["subspaces"] = subs;
    Json as = Json::object();
    for (const auto& [name, gens] : pf.assessments) as[name] = gens;
    doc["assessments"] = as;
    doc["densities"] = Json(std::vector<std::string>(pf.densities.begin(), pf.densities.end()));
    std::ostringstream os;
    detail::write_compact(os, doc, 0);
    os << "\n";
    return os.str();
}

} // namespace qdm::io

#endif // QDM_IO_PROBLEM_FILE_HPP
