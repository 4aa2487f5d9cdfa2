#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "instancegen.hpp"
#include "minrank.hpp"
#include "tensor.hpp"

namespace mvd {

using nlohmann::json;

template <class K>
const char* mode_name() {
    return field_traits<K>::mode_name();
}

/// Exact scalars serialize as "num/den" strings (den omitted when 1);
/// floats as JSON numbers. Exact parsing also accepts JSON integers.
inline json scalar_to_json(const Rational& x) { return x.str(); }
inline json scalar_to_json(double x) { return x; }

template <class K>
K scalar_from_json(const json& j);

template <>
inline Rational scalar_from_json<Rational>(const json& j) {
    if (j.is_string()) return Rational::from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw ParseError("expected a rational string or integer");
}

template <>
inline double scalar_from_json<double>(const json& j) {
    if (!j.is_number()) throw ParseError("expected a number");
    return j.get<double>();
}

template <class K>
json vector_to_json(const Vec<K>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(scalar_to_json(x));
    return a;
}

template <class K>
Vec<K> vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of scalars");
    Vec<K> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(scalar_from_json<K>(x));
    return v;
}

/// Matrices are arrays of row arrays.
template <class K>
json matrix_to_json(const Matrix<K>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i)));
    return rows;
}

template <class K>
Matrix<K> matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty row array");
    const std::size_t rows = j.size();
    Vec<K> first = vector_from_json<K>(j[0]);
    const std::size_t cols = first.size();
    Matrix<K> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        Vec<K> row = i == 0 ? first : vector_from_json<K>(j[i]);
        if (row.size() != cols) throw ParseError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = row[c];
    }
    return m;
}

template <class K>
json tensor_to_json(const Tensor3<K>& t) {
    json slices = json::array();
    for (std::size_t k = 0; k < t.p(); ++k) slices.push_back(matrix_to_json(slice(t, k)));
    return json{{"m", t.m()},
                {"n", t.n()},
                {"p", t.p()},
                {"mode", mode_name<K>()},
                {"slices", slices}};
}

template <class K>
Tensor3<K> tensor_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("expected a tensor object");
    if (j.value("mode", std::string(mode_name<K>())) != mode_name<K>())
        throw ParseError("tensor mode does not match requested arithmetic");
    const auto& sj = j.at("slices");
    if (!sj.is_array() || sj.empty()) throw ParseError("tensor needs slices");
    std::vector<Matrix<K>> slices;
    for (const auto& s : sj) slices.push_back(matrix_from_json<K>(s));
    Tensor3<K> t = from_slices(slices);
    if (j.contains("m") && j.at("m").get<std::size_t>() != t.m())
        throw ParseError("declared m does not match slices");
    if (j.contains("n") && j.at("n").get<std::size_t>() != t.n())
        throw ParseError("declared n does not match slices");
    if (j.contains("p") && j.at("p").get<std::size_t>() != t.p())
        throw ParseError("declared p does not match slices");
    return t;
}

template <class K>
json decomposition_to_json(const MatrixVectorDecomposition<K>& d) {
    json terms = json::array();
    for (const auto& t : d.terms())
        terms.push_back(json{{"M", matrix_to_json(t.M)}, {"w", vector_to_json(t.w)}});
    return json{{"mode", mode_name<K>()}, {"terms", terms}};
}

template <class K>
MatrixVectorDecomposition<K> decomposition_from_json(const json& j) {
    if (!j.is_object() || !j.contains("terms")) throw ParseError("expected a decomposition object");
    std::vector<MatrixVectorTerm<K>> terms;
    for (const auto& tj : j.at("terms"))
        terms.push_back({matrix_from_json<K>(tj.at("M")), vector_from_json<K>(tj.at("w"))});
    if (terms.empty()) return MatrixVectorDecomposition<K>();
    return MatrixVectorDecomposition<K>(std::move(terms));
}

template <class K>
json rank_one_to_json(const RankOneDecomposition<K>& d) {
    return json{{"mode", mode_name<K>()},
                {"U", matrix_to_json(d.U)},
                {"V", matrix_to_json(d.V)},
                {"W", matrix_to_json(d.W)}};
}

template <class K>
json basis_to_json(const std::vector<Matrix<K>>& basis) {
    json ms = json::array();
    for (const auto& m : basis) ms.push_back(matrix_to_json(m));
    return json{{"matrices", ms}, {"mode", mode_name<K>()}};
}

template <class K>
std::vector<Matrix<K>> basis_from_json(const json& j) {
    if (!j.is_object() || !j.contains("matrices"))
        throw ParseError("expected a basis object with 'matrices'");
    if (j.value("mode", std::string(mode_name<K>())) != mode_name<K>())
        throw ParseError("basis mode does not match requested arithmetic");
    std::vector<Matrix<K>> ms;
    for (const auto& mj : j.at("matrices")) ms.push_back(matrix_from_json<K>(mj));
    return ms;
}

inline json certificate_to_json(const Certificate& c) {
    return json{{"p_equals_q", c.p_equals_q},
                {"images_direct_sum", c.images_direct_sum},
                {"transpose_images_direct_sum", c.transpose_images_direct_sum},
                {"stacked_rank_ok", c.stacked_rank_ok}};
}

template <class K>
json minrank_result_to_json(const MinrankResult<K>& r) {
    json mins = json::array(), basis = json::array();
    for (const auto& m : r.minimizers) mins.push_back(matrix_to_json(m));
    for (const auto& m : r.hidden_basis) basis.push_back(matrix_to_json(m));
    return json{{"rho", r.rho},
                {"minimizers", mins},
                {"basis", basis},
                {"certificate", certificate_to_json(r.certificate)},
                {"mode", mode_name<K>()}};
}

inline json spec_to_json(const InstanceSpec& s) {
    return json{{"m", s.m},          {"n", s.n},
                {"p", s.p},          {"ranks", s.ranks},
                {"seed", s.seed},    {"mode", s.mode},
                {"entry_bound", s.entry_bound}};
}

inline InstanceSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("expected an instance spec object");
    InstanceSpec s;
    try {
        s.m = j.at("m").get<std::size_t>();
        s.n = j.at("n").get<std::size_t>();
        s.p = j.at("p").get<std::size_t>();
        s.ranks = j.at("ranks").get<std::vector<std::size_t>>();
        s.seed = j.value("seed", std::uint64_t{0});
        s.mode = j.value("mode", std::string("exact"));
        s.entry_bound = j.value("entry_bound", 9L);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad instance spec: ") + e.what());
    }
    return s;
}

/// Detects the arithmetic mode of a JSON document: the "mode" key when
/// present, otherwise "exact" iff scalars are strings.
inline std::string detect_mode(const json& j) {
    if (j.is_object() && j.contains("mode")) return j.at("mode").get<std::string>();
    const json* probe = &j;
    while (probe->is_object()) {
        if (probe->contains("slices")) probe = &probe->at("slices");
        else if (probe->contains("matrices")) probe = &probe->at("matrices");
        else if (probe->contains("terms")) probe = &probe->at("terms");
        else break;
    }
    while (probe->is_array() && !probe->empty()) probe = &(*probe)[0];
    if (probe->is_object() && probe->contains("M")) {
        probe = &probe->at("M");
        while (probe->is_array() && !probe->empty()) probe = &(*probe)[0];
    }
    return probe->is_string() ? "exact" : "float";
}

} // namespace mvd
