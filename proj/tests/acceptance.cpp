// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Exact-mode assertions are zero-tolerance.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <mvdecomp/mvdecomp.hpp>

using namespace mvd;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::size_t> draw_ranks(RandomEngine& eng, std::size_t terms,
                                    std::size_t budget) {
    std::vector<std::size_t> ranks;
    for (std::size_t l = 0; l < terms; ++l) {
        const std::size_t room = budget - (terms - l - 1);
        const long hi = std::min<long>(3, static_cast<long>(room));
        const std::size_t r = static_cast<std::size_t>(bounded_int(eng, 1, hi));
        ranks.push_back(r);
        budget -= r;
    }
    return ranks;
}

InstanceSpec exact_spec_for(int i) {
    RandomEngine eng(10'000 + i);
    InstanceSpec spec;
    spec.m = spec.n = static_cast<std::size_t>(bounded_int(eng, 6, 12));
    spec.p = static_cast<std::size_t>(bounded_int(eng, 3, 6));
    const std::size_t q = static_cast<std::size_t>(bounded_int(eng, 2, 4));
    spec.ranks = draw_ranks(eng, q, spec.m);
    spec.seed = static_cast<std::uint64_t>(20'000 + i);
    return spec;
}

// 1. Exact recovery: 200 seeded instances decompose entry-exactly and match
//    the hidden decomposition in canonical form, within 60 s total.
void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    int good = 0;
    const int total = 200;
    for (int i = 0; i < total; ++i) {
        const InstanceSpec spec = exact_spec_for(i);
        const auto inst = gen_instance<Rational>(spec);
        try {
            const auto d = decompose(inst.tensor, 30'000 + i);
            if (reconstruct(d, spec.m, spec.n, spec.p) == inst.tensor &&
                identical_terms(canonicalize(d), canonicalize(inst.hidden)))
                ++good;
        } catch (const Error&) {
        }
    }
    const double secs = seconds_since(t0);
    report(1, "exact recovery", good == total && secs < 60.0,
           std::to_string(good) + "/" + std::to_string(total) +
               " entry-exact and canonical-equal in " + std::to_string(secs) + "s");
}

// 2. Uniqueness / seed-independence: three seeds give identical canonical forms.
void criterion2() {
    int good = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        const InstanceSpec spec = exact_spec_for(500 + i);
        const auto inst = gen_instance<Rational>(spec);
        try {
            const auto d1 = canonicalize(decompose(inst.tensor, 41'000 + i));
            const auto d2 = canonicalize(decompose(inst.tensor, 42'000 + i));
            const auto d3 = canonicalize(decompose(inst.tensor, 43'000 + i));
            if (identical_terms(d1, d2) && identical_terms(d2, d3)) ++good;
        } catch (const Error&) {
        }
    }
    report(2, "uniqueness across seeds", good == total,
           std::to_string(good) + "/" + std::to_string(total) +
               " identical canonical forms under 3 seeds");
}

// 3. Eigenstructure law: q nontrivial eigenvalues, each equal to the hidden
//    quotient <a,w>/<b,w>, eigenspace dimension n - r + rank(M_l). Exact.
void criterion3() {
    int good = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        const InstanceSpec spec = exact_spec_for(900 + i);
        const auto inst = gen_instance<Rational>(spec);
        try {
            const auto ic = compute_images(inst.tensor, 51'000 + i);
            bool ok = ic.spectrum.q() == inst.hidden.q() && ic.r == inst.hidden.rank();
            std::vector<bool> used(inst.hidden.q(), false);
            for (std::size_t e = 0; e < ic.spectrum.q() && ok; ++e) {
                bool matched = false;
                for (std::size_t l = 0; l < inst.hidden.q(); ++l) {
                    if (used[l]) continue;
                    const auto& term = inst.hidden.terms()[l];
                    const Rational denom = dot(ic.pencil.b, term.w);
                    if (denom.is_zero()) continue;
                    if (ic.spectrum.eigenvalues[e] == dot(ic.pencil.a, term.w) / denom) {
                        used[l] = true;
                        matched = ic.spectrum.eigenspaces[e].dim() ==
                                  spec.n - ic.r + rank(term.M);
                        break;
                    }
                }
                ok = ok && matched;
            }
            if (ok) ++good;
        } catch (const Error&) {
        }
    }
    report(3, "eigenstructure law", good == total,
           std::to_string(good) + "/" + std::to_string(total) +
               " runs with exact eigenvalues and dimension law");
}

// 4. Minrank recovery: correct rho, minimizers up to scale, valid
//    certificate, and 200 random >=2-support combinations of rank > rho.
void criterion4() {
    int good = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        RandomEngine eng(60'000 + i);
        InstanceSpec spec;
        // unique strict minimum, ties among the larger ranks when q = 3
        const std::size_t rmin = static_cast<std::size_t>(bounded_int(eng, 1, 2));
        const std::size_t rbig = rmin + static_cast<std::size_t>(bounded_int(eng, 1, 2));
        const bool three_terms = bounded_int(eng, 0, 9) < 7;
        spec.ranks = three_terms
                         ? std::vector<std::size_t>{rmin, rbig, rbig}
                         : std::vector<std::size_t>{rmin, rbig};
        spec.p = spec.ranks.size();
        std::size_t total_rank = 0;
        for (std::size_t r : spec.ranks) total_rank += r;
        spec.m = spec.n = total_rank + static_cast<std::size_t>(bounded_int(
                              eng, 0, static_cast<long>(12 - total_rank)));
        spec.seed = static_cast<std::uint64_t>(61'000 + i);
        const auto gen = gen_minrank_basis<Rational>(spec);

        try {
            const auto result = minrank(gen.basis, 62'000 + i);
            bool ok = result.certificate.valid() && result.rho == rmin &&
                      result.minimizers.size() == 1;
            if (ok) {
                const Matrix<Rational>* hidden_min = nullptr;
                for (const auto& h : gen.hidden)
                    if (rank(h) == rmin) hidden_min = &h;
                ok = hidden_min != nullptr &&
                     colinear(result.minimizers[0].entries(), hidden_min->entries());
            }
            for (int round = 0; round < 200 && ok; ++round) {
                Matrix<Rational> combo(spec.m, spec.n);
                std::size_t support = 0;
                while (support < 2) {
                    combo = Matrix<Rational>(spec.m, spec.n);
                    support = 0;
                    for (const auto& b : result.hidden_basis) {
                        const long c = bounded_int(eng, -9, 9);
                        if (c == 0) continue;
                        ++support;
                        combo = combo + b.scaled(Rational(c));
                    }
                }
                ok = rank(combo) > result.rho;
            }
            if (ok) ++good;
        } catch (const Error&) {
        }
    }
    report(4, "minrank recovery", good == total,
           std::to_string(good) + "/" + std::to_string(total) +
               " instances with certified minimizers and no low-rank combination");
}

// 5. Jennrich float baseline: reconstruction residual < 1e-6 and pairing
//    residual < 1e-8 on 50 random rank-r tensors.
void criterion5() {
    int good = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        RandomEngine eng(70'000 + i);
        InstanceSpec spec;
        spec.m = static_cast<std::size_t>(bounded_int(eng, 4, 10));
        spec.n = static_cast<std::size_t>(bounded_int(eng, 4, 10));
        spec.p = static_cast<std::size_t>(bounded_int(eng, 3, 10));
        const std::size_t rmax = std::min({spec.m, spec.n, std::size_t{5}});
        const std::size_t r =
            static_cast<std::size_t>(bounded_int(eng, 2, static_cast<long>(rmax)));
        spec.ranks.assign(r, 1);
        spec.seed = static_cast<std::uint64_t>(71'000 + i);
        spec.mode = "float";
        const auto inst = gen_instance<double>(spec);
        try {
            const auto out = jennrich_decompose_detailed(inst.tensor, 72'000 + i);
            bool ok = out.reconstruction_residual < 1e-6;
            for (const double resid : out.pairing_residuals) ok = ok && resid < 1e-8;
            if (ok) ++good;
        } catch (const Error&) {
        }
    }
    report(5, "jennrich float baseline", good == total,
           std::to_string(good) + "/" + std::to_string(total) +
               " tensors under residual 1e-6 and pairing 1e-8");
}

// 6. Float pipeline parity: images within principal angle 1e-6 of the hidden
//    images, and float decompose residual < 1e-6, on multi-rank instances.
void criterion6() {
    int good = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        RandomEngine eng(80'000 + i);
        InstanceSpec spec;
        spec.m = spec.n = static_cast<std::size_t>(bounded_int(eng, 6, 10));
        spec.p = static_cast<std::size_t>(bounded_int(eng, 3, 6));
        const std::size_t q = static_cast<std::size_t>(bounded_int(eng, 2, 3));
        spec.ranks = draw_ranks(eng, q, spec.m);
        spec.ranks.back() = std::max<std::size_t>(spec.ranks.back(), 2); // multi-rank
        std::size_t sum = 0;
        for (std::size_t rl : spec.ranks) sum += rl;
        if (sum > spec.m) spec.m = spec.n = sum;
        spec.seed = static_cast<std::uint64_t>(81'000 + i);
        spec.mode = "float";
        const auto inst = gen_instance<double>(spec);

        try {
            const auto ic = compute_images_float(inst.tensor, 82'000 + i);
            bool ok = ic.spectrum.q() == inst.hidden.q();
            std::vector<bool> used(inst.hidden.q(), false);
            for (std::size_t e = 0; e < ic.spectrum.q() && ok; ++e) {
                bool matched = false;
                for (std::size_t l = 0; l < inst.hidden.q(); ++l) {
                    if (used[l]) continue;
                    const auto hidden_img = image(inst.hidden.terms()[l].M);
                    if (hidden_img.dim() != ic.spectrum.images[e].dim()) continue;
                    if (principal_angle(ic.spectrum.images[e], hidden_img) < 1e-6) {
                        used[l] = true;
                        matched = true;
                        break;
                    }
                }
                ok = ok && matched;
            }
            if (ok) {
                const auto d = decompose(inst.tensor, 83'000 + i);
                ok = detail::tensor_rel_residual(
                         reconstruct(d, spec.m, spec.n, spec.p), inst.tensor) < 1e-6;
            }
            if (ok) ++good;
        } catch (const Error&) {
        }
    }
    report(6, "float pipeline parity", good == total,
           std::to_string(good) + "/" + std::to_string(total) +
               " instances with images within 1e-6 and residual < 1e-6");
}

// 7. Error paths: every adversarial fixture raises its designated error.
void criterion7() {
    int good = 0, total = 0;

    // shared right factor: certificate flags the hidden decomposition, and
    // the pipeline refuses the basis instead of returning a silent answer
    for (int i = 0; i < 20; ++i) {
        ++total;
        const auto basis =
            gen_shared_right_factor_basis<Rational>(6, 5, 3, 90'000 + i);
        std::vector<MatrixVectorTerm<Rational>> terms;
        for (std::size_t l = 0; l < basis.size(); ++l) {
            Vec<Rational> w(basis.size(), Rational(0));
            w[l] = Rational(1);
            terms.push_back({basis[l], w});
        }
        const auto cert =
            check_certificate(MatrixVectorDecomposition<Rational>(terms), basis.size());
        bool ok = !cert.transpose_images_direct_sum && !cert.valid();
        try {
            (void)minrank(basis, 91'000 + i);
            ok = false; // an uncertified success must never come back
        } catch (const CertificateFailed&) {
        } catch (const HypothesisViolation&) {
        }
        if (ok) ++good;
    }

    // colinear weight vectors break simultaneous diagonalization
    for (int i = 0; i < 20; ++i) {
        ++total;
        const auto inst = gen_colinear_w_instance<double>(6, 6, 4, 3, 92'000 + i);
        try {
            (void)jennrich_decompose(inst.tensor, 93'000 + i);
        } catch (const DegenerateSpectrum&) {
            ++good;
            continue;
        } catch (const PairingFailure&) {
            ++good;
            continue;
        }
    }

    // a perturbed disjoint-rows tensor is rejected
    for (int i = 0; i < 20; ++i) {
        ++total;
        RandomEngine eng(94'000 + i);
        const std::size_t m = 5, n = 4, p = 3;
        // all-nonzero blocks so any single-entry edit breaks proportionality
        Matrix<Rational> m1(1, n), m2(2, n);
        for (std::size_t j = 0; j < n; ++j) m1(0, j) = Rational(bounded_int(eng, 1, 9));
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t j = 0; j < n; ++j)
                m2(i2, j) = Rational(bounded_int(eng, 1, 9));
        if (rank(m2) != 2) { --i; --total; continue; }
        Matrix<Rational> full1(m, n), full2(m, n);
        for (std::size_t j = 0; j < n; ++j) full1(0, j) = m1(0, j);
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t j = 0; j < n; ++j) full2(1 + i2, j) = m2(i2, j);
        // strictly positive weights: every slice block is nonzero, so any
        // single-entry edit breaks proportionality somewhere
        Vec<Rational> w1(p), w2(p);
        do {
            for (std::size_t k = 0; k < p; ++k) {
                w1[k] = Rational(bounded_int(eng, 1, 9));
                w2[k] = Rational(bounded_int(eng, 1, 9));
            }
        } while (colinear(w1, w2));
        const MatrixVectorDecomposition<Rational> hidden({{full1, w1}, {full2, w2}});
        auto t = reconstruct(hidden, m, n, p);
        if (disjoint_rows_decompose(t, {1, 2}).q() != 2) continue;

        const std::size_t pi = static_cast<std::size_t>(bounded_int(eng, 0, 2));
        const std::size_t pj = static_cast<std::size_t>(bounded_int(eng, 0, 3));
        const std::size_t pk = static_cast<std::size_t>(bounded_int(eng, 0, 2));
        t(pi, pj, pk) = t(pi, pj, pk) + Rational(1);
        try {
            (void)disjoint_rows_decompose(t, {1, 2});
        } catch (const NotDisjointRows&) {
            ++good;
        }
    }

    report(7, "error-path coverage", good == total,
           std::to_string(good) + "/" + std::to_string(total) +
               " adversarial fixtures raised the designated error");
}

// 8. Non-uniqueness fixture: both rank-1 splits of a rank-2 matrix rebuild it
//    exactly and differ as term sets.
void criterion8() {
    const Vec<Rational> u1{Rational(1), Rational(0), Rational(2)};
    const Vec<Rational> u2{Rational(0), Rational(1), Rational(1)};
    const Vec<Rational> v1{Rational(1), Rational(2)};
    const Vec<Rational> v2{Rational(3), Rational(-1)};
    const auto m = outer_product(u1, v1) + outer_product(u2, v2);

    Vec<Rational> v12, u21;
    for (std::size_t i = 0; i < v1.size(); ++i) v12.push_back(v1[i] + v2[i]);
    for (std::size_t i = 0; i < u1.size(); ++i) u21.push_back(u2[i] - u1[i]);

    const auto s1a = outer_product(u1, v1), s1b = outer_product(u2, v2);
    const auto s2a = outer_product(u1, v12), s2b = outer_product(u21, v2);

    const bool rebuild = (s1a + s1b == m) && (s2a + s2b == m) && rank(m) == 2;
    const bool distinct = !((s1a == s2a && s1b == s2b) || (s1a == s2b && s1b == s2a));
    report(8, "rank-2 non-uniqueness fixture", rebuild && distinct,
           std::string("both splits rebuild M exactly; term sets ") +
               (distinct ? "differ" : "coincide"));
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
