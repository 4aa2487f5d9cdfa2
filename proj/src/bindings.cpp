// Python bindings for the mvdecomp core: float-mode tensors cross the
// boundary as numpy arrays indexed [i, j, k]; exact-mode values as nested
// lists of "num/den" strings (plain ints are accepted on input).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <mvdecomp/mvdecomp.hpp>

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

mvd::Tensor3<double> tensor_from_array(const py::array_t<double>& a) {
    if (a.ndim() != 3) throw mvd::DimensionMismatch("expected a 3-d array");
    auto r = a.unchecked<3>();
    mvd::Tensor3<double> t(static_cast<std::size_t>(r.shape(0)),
                           static_cast<std::size_t>(r.shape(1)),
                           static_cast<std::size_t>(r.shape(2)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        for (py::ssize_t j = 0; j < r.shape(1); ++j)
            for (py::ssize_t k = 0; k < r.shape(2); ++k)
                t(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                  static_cast<std::size_t>(k)) = r(i, j, k);
    return t;
}

py::array_t<double> tensor_to_array(const mvd::Tensor3<double>& t) {
    py::array_t<double> a({t.m(), t.n(), t.p()});
    auto r = a.mutable_unchecked<3>();
    for (std::size_t i = 0; i < t.m(); ++i)
        for (std::size_t j = 0; j < t.n(); ++j)
            for (std::size_t k = 0; k < t.p(); ++k)
                r(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j),
                  static_cast<py::ssize_t>(k)) = t(i, j, k);
    return a;
}

mvd::Matrix<double> matrix_from_array(const py::array_t<double>& a) {
    if (a.ndim() != 2) throw mvd::DimensionMismatch("expected a 2-d array");
    auto r = a.unchecked<2>();
    mvd::Matrix<double> m(static_cast<std::size_t>(r.shape(0)),
                          static_cast<std::size_t>(r.shape(1)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        for (py::ssize_t j = 0; j < r.shape(1); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = r(i, j);
    return m;
}

py::array_t<double> matrix_to_array(const mvd::Matrix<double>& m) {
    py::array_t<double> a({m.rows(), m.cols()});
    auto r = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
    return a;
}

py::array_t<double> vector_to_array(const mvd::Vec<double>& v) {
    py::array_t<double> a(v.size());
    auto r = a.mutable_unchecked<1>();
    for (std::size_t i = 0; i < v.size(); ++i)
        r(static_cast<py::ssize_t>(i)) = v[i];
    return a;
}

mvd::Rational rational_from_object(const py::handle& h) {
    if (py::isinstance<py::int_>(h)) return mvd::Rational(h.cast<long>());
    if (py::isinstance<py::str>(h))
        return mvd::Rational::from_string(h.cast<std::string>());
    throw mvd::ParseError("exact entries must be ints or 'num/den' strings");
}

mvd::Matrix<mvd::Rational> matrix_from_lists(const py::sequence& rows) {
    const std::size_t nrows = rows.size();
    if (nrows == 0) throw mvd::EmptyInput("empty matrix");
    py::sequence first = rows[0].cast<py::sequence>();
    const std::size_t ncols = first.size();
    mvd::Matrix<mvd::Rational> m(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i) {
        py::sequence row = rows[i].cast<py::sequence>();
        if (row.size() != ncols) throw mvd::ParseError("ragged matrix rows");
        for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rational_from_object(row[j]);
    }
    return m;
}

py::list matrix_to_lists(const mvd::Matrix<mvd::Rational>& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.append(py::str(m(i, j).str()));
        rows.append(row);
    }
    return rows;
}

py::list vector_to_lists(const mvd::Vec<mvd::Rational>& v) {
    py::list out;
    for (const auto& x : v) out.append(py::str(x.str()));
    return out;
}

mvd::Tensor3<mvd::Rational> tensor_from_slices_obj(const py::sequence& slices) {
    std::vector<mvd::Matrix<mvd::Rational>> ms;
    for (const auto& s : slices) ms.push_back(matrix_from_lists(s.cast<py::sequence>()));
    return mvd::from_slices(ms);
}

py::dict decomposition_to_dict(const mvd::MatrixVectorDecomposition<mvd::Rational>& d) {
    py::list terms;
    for (const auto& t : d.terms()) {
        py::dict term;
        term["M"] = matrix_to_lists(t.M);
        term["w"] = vector_to_lists(t.w);
        terms.append(term);
    }
    return py::dict("terms"_a = terms, "rank"_a = d.rank(), "q"_a = d.q());
}

py::dict decomposition_to_dict(const mvd::MatrixVectorDecomposition<double>& d) {
    py::list terms;
    for (const auto& t : d.terms()) {
        py::dict term;
        term["M"] = matrix_to_array(t.M);
        term["w"] = vector_to_array(t.w);
        terms.append(term);
    }
    return py::dict("terms"_a = terms, "rank"_a = d.rank(), "q"_a = d.q());
}

py::dict certificate_to_dict(const mvd::Certificate& c) {
    return py::dict("p_equals_q"_a = c.p_equals_q,
                    "images_direct_sum"_a = c.images_direct_sum,
                    "transpose_images_direct_sum"_a = c.transpose_images_direct_sum,
                    "stacked_rank_ok"_a = c.stacked_rank_ok,
                    "valid"_a = c.valid());
}

mvd::DecomposeOptions make_options(long bound, std::size_t max_retries, double tol_rank,
                                   double tol_eig, double tol_prop, double tol_resid) {
    mvd::DecomposeOptions o;
    o.coefficient_bound = bound;
    o.max_retries = max_retries;
    o.tol_rank = tol_rank;
    o.tol_eig = tol_eig;
    o.tol_prop = tol_prop;
    o.tol_resid = tol_resid;
    return o;
}

} // namespace

PYBIND11_MODULE(mvdecomp, m) {
    m.doc() = "minimum matrix-vector decomposition of order-3 tensors, minrank of "
              "matrix subspaces, and simultaneous diagonalization";

    py::register_exception<mvd::Error>(m, "MvdError", PyExc_RuntimeError);
    const py::object base = m.attr("MvdError");
    py::register_exception<mvd::HypothesisViolation>(m, "HypothesisViolation", base);
    py::register_exception<mvd::CertificateFailed>(m, "CertificateFailed", base);
    py::register_exception<mvd::DegenerateSpectrum>(m, "DegenerateSpectrum", base);
    py::register_exception<mvd::PairingFailure>(m, "PairingFailure", base);
    py::register_exception<mvd::NotDisjointRows>(m, "NotDisjointRows", base);

    m.def(
        "decompose",
        [](const py::array_t<double>& tensor, std::uint64_t seed, long bound,
           std::size_t max_retries, double tol_rank, double tol_eig, double tol_prop,
           double tol_resid) {
            const auto t = tensor_from_array(tensor);
            const auto opts = make_options(bound, max_retries, tol_rank, tol_eig,
                                           tol_prop, tol_resid);
            return decomposition_to_dict(mvd::decompose(t, seed, opts));
        },
        "tensor"_a, "seed"_a = 0, "bound"_a = 10000, "max_retries"_a = 8,
        "tol_rank"_a = 1e-9, "tol_eig"_a = 1e-8, "tol_prop"_a = 1e-7,
        "tol_resid"_a = 1e-6,
        "Minimum matrix-vector decomposition of a float tensor (m, n, p).");

    m.def(
        "decompose_exact",
        [](const py::sequence& slices, std::uint64_t seed, long bound,
           std::size_t max_retries) {
            const auto t = tensor_from_slices_obj(slices);
            mvd::DecomposeOptions opts;
            opts.coefficient_bound = bound;
            opts.max_retries = max_retries;
            return decomposition_to_dict(
                mvd::canonicalize(mvd::decompose(t, seed, opts)));
        },
        "slices"_a, "seed"_a = 0, "bound"_a = 10000, "max_retries"_a = 8,
        "Exact-mode decomposition; slices are nested lists of ints or 'num/den' "
        "strings, the result is in canonical form.");

    m.def(
        "jennrich",
        [](const py::array_t<double>& tensor, std::uint64_t seed, long bound,
           double tol_rank, double tol_eig) {
            mvd::DecomposeOptions opts;
            opts.coefficient_bound = bound;
            opts.tol_rank = tol_rank;
            opts.tol_eig = tol_eig;
            const auto out =
                mvd::jennrich_decompose_detailed(tensor_from_array(tensor), seed, opts);
            return py::dict("U"_a = matrix_to_array(out.decomposition.U),
                            "V"_a = matrix_to_array(out.decomposition.V),
                            "W"_a = matrix_to_array(out.decomposition.W),
                            "residual"_a = out.reconstruction_residual,
                            "pairing_residuals"_a = out.pairing_residuals);
        },
        "tensor"_a, "seed"_a = 0, "bound"_a = 10000, "tol_rank"_a = 1e-9,
        "tol_eig"_a = 1e-8,
        "Rank-one decomposition by simultaneous diagonalization (float).");

    m.def(
        "minrank",
        [](const std::vector<py::array_t<double>>& matrices, std::uint64_t seed,
           long bound, std::size_t max_retries) {
            std::vector<mvd::Matrix<double>> basis;
            for (const auto& a : matrices) basis.push_back(matrix_from_array(a));
            mvd::DecomposeOptions opts;
            opts.coefficient_bound = bound;
            opts.max_retries = max_retries;
            const auto r = mvd::minrank(basis, seed, opts);
            py::list mins, hidden;
            for (const auto& mm : r.minimizers) mins.append(matrix_to_array(mm));
            for (const auto& mm : r.hidden_basis) hidden.append(matrix_to_array(mm));
            return py::dict("rho"_a = r.rho, "minimizers"_a = mins, "basis"_a = hidden,
                            "certificate"_a = certificate_to_dict(r.certificate));
        },
        "matrices"_a, "seed"_a = 0, "bound"_a = 10000, "max_retries"_a = 8,
        "All minimum-rank matrices (up to scale) in the span of float matrices.");

    m.def(
        "minrank_exact",
        [](const py::sequence& matrices, std::uint64_t seed, long bound,
           std::size_t max_retries) {
            std::vector<mvd::Matrix<mvd::Rational>> basis;
            for (const auto& mm : matrices)
                basis.push_back(matrix_from_lists(mm.cast<py::sequence>()));
            mvd::DecomposeOptions opts;
            opts.coefficient_bound = bound;
            opts.max_retries = max_retries;
            const auto r = mvd::minrank(basis, seed, opts);
            py::list mins, hidden;
            for (const auto& mm : r.minimizers) mins.append(matrix_to_lists(mm));
            for (const auto& mm : r.hidden_basis) hidden.append(matrix_to_lists(mm));
            return py::dict("rho"_a = r.rho, "minimizers"_a = mins, "basis"_a = hidden,
                            "certificate"_a = certificate_to_dict(r.certificate));
        },
        "matrices"_a, "seed"_a = 0, "bound"_a = 10000, "max_retries"_a = 8,
        "Exact-mode minrank; matrices are nested lists of ints or 'num/den' strings.");

    m.def(
        "generate_instance",
        [](std::size_t m_, std::size_t n_, std::size_t p_,
           const std::vector<std::size_t>& ranks, std::uint64_t seed, long entry_bound,
           const std::string& mode) {
            mvd::InstanceSpec spec;
            spec.m = m_;
            spec.n = n_;
            spec.p = p_;
            spec.ranks = ranks;
            spec.seed = seed;
            spec.entry_bound = entry_bound;
            spec.mode = mode;
            if (mode == "float") {
                const auto inst = mvd::gen_instance<double>(spec);
                return py::dict("tensor"_a = tensor_to_array(inst.tensor),
                                "hidden"_a = decomposition_to_dict(inst.hidden));
            }
            const auto inst = mvd::gen_instance<mvd::Rational>(spec);
            py::list slices;
            for (std::size_t k = 0; k < inst.tensor.p(); ++k)
                slices.append(matrix_to_lists(mvd::slice(inst.tensor, k)));
            return py::dict("tensor"_a = slices,
                            "hidden"_a = decomposition_to_dict(inst.hidden));
        },
        "m"_a, "n"_a, "p"_a, "ranks"_a, "seed"_a = 0, "entry_bound"_a = 9,
        "mode"_a = "float",
        "Seeded instance with hidden ground truth; both direct-sum hypotheses hold "
        "by construction.");

    m.def(
        "reconstruct",
        [](const py::list& terms, std::size_t m_, std::size_t n_, std::size_t p_) {
            std::vector<mvd::MatrixVectorTerm<double>> ts;
            for (const auto& item : terms) {
                const py::dict term = item.cast<py::dict>();
                const auto mat = matrix_from_array(term["M"].cast<py::array_t<double>>());
                const auto wa = term["w"].cast<py::array_t<double>>();
                auto wr = wa.unchecked<1>();
                mvd::Vec<double> w(static_cast<std::size_t>(wr.shape(0)));
                for (py::ssize_t i = 0; i < wr.shape(0); ++i)
                    w[static_cast<std::size_t>(i)] = wr(i);
                ts.push_back({mat, w});
            }
            const mvd::MatrixVectorDecomposition<double> d(std::move(ts));
            return tensor_to_array(mvd::reconstruct(d, m_, n_, p_));
        },
        "terms"_a, "m"_a, "n"_a, "p"_a,
        "Rebuild a float tensor from decomposition terms.");
}
