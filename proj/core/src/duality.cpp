#include "purkit/duality.hpp"

#include "purkit/error.hpp"

#include <algorithm>
#include <functional>

namespace purkit {

ModuleHandle::ModuleHandle(JetSystem presentation, CompletionOptions opt)
    : sys_(std::move(presentation)), opt_(opt) {
    sys_.default_names();
}

OpMatrix ModuleHandle::matrix() const {
    return matrix_from_rows(sys_.equations, sys_.m, sys_.nd, sys_.nvars);
}

const JanetBasis& ModuleHandle::basis() {
    if (!basis_) basis_ = std::make_shared<JanetBasis>(complete_to_involution(sys_, opt_));
    return *basis_;
}

const FreeResolution& ModuleHandle::resolution() {
    if (!res_) res_ = std::make_shared<FreeResolution>(input_resolution(sys_, opt_));
    return *res_;
}

long long ModuleHandle::rank() { return basis().chars.rank(); }
int ModuleHandle::codim() { return basis().chars.codim(); }
int ModuleHandle::dim() { return basis().chars.dim(); }

namespace {

JetSystem system_of(const OpMatrix& A) {
    JetSystem s(A.nd, A.nvars, A.cols);
    s.equations = rows_from_matrix(A);
    s.default_names();
    return s;
}

LinearForm unadapt_row(const LinearForm& f, const JanetBasis& basis) {
    if (!basis.applied_change) return f;
    JetSystem tmp(f.nd(), f.nvars(), f.unknowns());
    LinearForm g = f;
    g.cert.clear();
    tmp.equations.push_back(std::move(g));
    tmp.default_names();
    return change_coordinates(tmp, *q_inverse(*basis.applied_change)).equations[0];
}

// express each target row over the row module of gens: R with R * gens = targets
OpMatrix express_over(const OpMatrix& targets, const OpMatrix& gens,
                      const CompletionOptions& opt_in) {
    CompletionOptions opt = opt_in;
    opt.allow_coordinate_change = false;
    auto attempt = [&](const OpMatrix& tg, const OpMatrix& gn) {
        JanetBasis b = complete_to_involution(system_of(gn), opt);
        OpMatrix T = b.tracking();
        OpMatrix R(0, gn.rows, gn.nd, gn.nvars);
        for (auto& r : rows_from_matrix(tg)) {
            std::vector<ScalarOp> coeffs;
            LinearForm rem = normal_form(r, b, &coeffs);
            if (!rem.is_zero())
                throw Error("internal", "row does not lie in the generated module");
            std::vector<ScalarOp> row(gn.rows, ScalarOp(gn.nd, gn.nvars));
            for (int i = 0; i < b.size(); ++i)
                for (int t = 0; t < gn.rows; ++t)
                    row[t] = row[t] + compose(coeffs[i], T.a[i][t]);
            R.a.push_back(std::move(row));
            R.rows++;
        }
        return R;
    };
    try {
        return attempt(targets, gens);
    } catch (const Error& e) {
        if (std::string(e.code()) != "order-bound" || !opt_in.allow_coordinate_change) throw;
    }
    for (int seed = 1; seed <= opt_in.retry_seeds; ++seed) {
        QMatrix C = random_invertible_matrix(gens.nd, static_cast<unsigned>(seed));
        try {
            OpMatrix R = attempt(transform_matrix(targets, C), transform_matrix(gens, C));
            return transform_matrix(R, *q_inverse(C));
        } catch (const Error& e) {
            if (std::string(e.code()) != "order-bound") throw;
        }
    }
    throw Error("not-delta-regular", "no regular coordinates for module expression");
}

} // namespace

std::vector<ScalarOp> annihilator_ideal(const LinearForm& row, const JetSystem& sys,
                                        const CompletionOptions& opt_in) {
    JetSystem stacked = sys;
    stacked.equations.clear();
    LinearForm r0 = row;
    r0.cert.clear();
    stacked.equations.push_back(r0);
    for (auto& e : sys.equations) {
        LinearForm f = e;
        f.cert.clear();
        stacked.equations.push_back(f);
    }
    stacked.labels.clear();
    stacked.default_names();
    OpMatrix syz = row_syzygies(
        matrix_from_rows(stacked.equations, stacked.m, stacked.nd, stacked.nvars), opt_in);
    std::vector<ScalarOp> gens;
    for (int i = 0; i < syz.rows; ++i) {
        ScalarOp g = syz.a[i][0];
        if (g.is_zero()) continue;
        g = g.scale(g.terms().begin()->second.inv()); // monic
        bool dup = false;
        for (auto& h : gens)
            if (h == g) dup = true;
        if (!dup) gens.push_back(g);
    }
    std::sort(gens.begin(), gens.end(), [](const ScalarOp& a, const ScalarOp& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.str() < b.str();
    });
    return gens;
}

int element_codimension(const LinearForm& row, const JetSystem& sys,
                        const CompletionOptions& opt_in) {
    CompletionOptions opt = opt_in;
    auto gens = annihilator_ideal(row, sys, opt);
    if (gens.empty()) return 0;
    JetSystem one(sys.nd, sys.nvars, 1);
    for (auto& g : gens) {
        LinearForm f(sys.nd, sys.nvars, 1);
        for (auto& [mu, a] : g.terms()) f.add_term(Jet{0, mu}, a);
        one.equations.push_back(std::move(f));
    }
    one.default_names();
    JanetBasis b = complete_to_involution(one, opt);
    return b.chars.codim();
}

TorsionReport torsion_test(ModuleHandle& M) {
    TorsionReport rep;
    const JanetBasis& basis = M.basis();
    const JetSystem& sys = M.presentation();
    OpMatrix A = M.matrix();

    if (M.rank() == 0 && !sys.equations.empty()) {
        rep.verdict = TorsionVerdict::torsion_module;
        for (int k = 0; k < sys.m; ++k) {
            LinearForm unit(sys.nd, sys.nvars, sys.m);
            unit.add_term(Jet{k, MultiIndex(sys.nd, 0)}, Scalar::one(sys.nvars));
            if (reduces_to_zero(adapt_row(unit, basis), basis)) continue;
            auto ann = annihilator_ideal(unit, sys, M.options());
            if (ann.empty())
                throw Error("internal", "rank-zero module with a free generator");
            rep.generators.push_back(TorsionGenerator{unit, ann.front()});
        }
        return rep;
    }

    OpMatrix adA = adjoint(A);
    OpMatrix ccad = row_syzygies(adA, M.options());
    OpMatrix P = adjoint(ccad);
    if (P.rows != sys.m) throw Error("internal", "parametrization shape mismatch");
    if (!matrix_compose(A, P).is_zero())
        throw Error("internal", "candidate parametrization does not annihilate the system");
    OpMatrix dd = row_syzygies(P, M.options());
    rep.candidate_relations = dd;

    std::vector<LinearForm> torsion_rows;
    for (auto& r : rows_from_matrix(dd)) {
        LinearForm nf = normal_form(adapt_row(r, basis), basis);
        if (!nf.is_zero()) {
            nf = unadapt_row(nf, basis);
            nf.make_monic();
            bool dup = false;
            for (auto& t : torsion_rows)
                if (t.same_terms(nf)) dup = true;
            if (!dup) torsion_rows.push_back(nf);
        }
    }
    if (torsion_rows.empty()) {
        rep.verdict = TorsionVerdict::torsion_free;
        rep.certified_parametrization = P;
        return rep;
    }
    rep.verdict = TorsionVerdict::has_torsion;
    for (auto& t : torsion_rows) {
        auto ann = annihilator_ideal(t, sys, M.options());
        if (ann.empty())
            throw Error("internal", "torsion candidate without annihilator");
        rep.generators.push_back(TorsionGenerator{t, ann.front()});
    }
    return rep;
}

ExtPresentation ext_module(ModuleHandle& M, int i) {
    if (i < 0) throw Error("shape", "negative ext index");
    ExtPresentation out;
    out.index = i;
    const FreeResolution& res = M.resolution();
    int L = static_cast<int>(res.maps.size()); // maps 0..L-1
    int nd = M.presentation().nd, nvars = M.presentation().nvars;

    auto rank_at = [&](int j) {
        // ambient rank of stage j: m for j = 0, rows(maps[j-1]) otherwise
        if (j == 0) return M.presentation().m;
        return res.maps[j - 1].rows;
    };
    if (i > L) { // beyond the resolution, ext vanishes with empty data
        out.generators = OpMatrix(0, 0, nd, nvars);
        out.relations = OpMatrix(0, 0, nd, nvars);
        out.is_zero = true;
        return out;
    }
    int amb = rank_at(i);
    OpMatrix Bi = (i < L) ? adjoint(res.maps[i]) : OpMatrix(amb, 0, nd, nvars);
    // kernel generators: syzygies of the rows of Bi
    OpMatrix K(0, amb, nd, nvars);
    if (Bi.cols == 0) {
        K = OpMatrix::identity(amb, nd, nvars);
    } else {
        K = row_syzygies(Bi, M.options());
    }
    out.generators = K;
    int s = K.rows;
    if (s == 0) {
        out.relations = OpMatrix(0, 0, nd, nvars);
        out.is_zero = true;
        return out;
    }
    // image rows from the previous dual map
    OpMatrix R(0, s, nd, nvars);
    if (i >= 1) {
        OpMatrix Bprev = adjoint(res.maps[i - 1]); // rank_at(i-1) x amb
        R = express_over(Bprev, K, M.options());
    }
    out.relations = R;
    // zero iff every generator lies in the span of the relations
    if (R.rows == 0) {
        out.is_zero = false;
    } else {
        out.is_zero = rows_member(OpMatrix::identity(s, nd, nvars), R, M.options());
    }
    return out;
}

long long differential_rank(ModuleHandle& M) { return M.rank(); }

OpMatrix minimal_parametrization(ModuleHandle& M, const std::vector<int>& keep) {
    TorsionReport tr = torsion_test(M);
    if (tr.verdict != TorsionVerdict::torsion_free || !tr.certified_parametrization)
        throw Error("not-a-parametrization", "module is not torsion-free");
    const OpMatrix& P = *tr.certified_parametrization;
    OpMatrix Pk(P.rows, static_cast<int>(keep.size()), P.nd, P.nvars);
    for (std::size_t j = 0; j < keep.size(); ++j) {
        if (keep[j] < 0 || keep[j] >= P.cols) throw Error("shape", "keep column out of range");
        for (int i = 0; i < P.rows; ++i) Pk.a[i][j] = P.a[i][keep[j]];
    }
    OpMatrix dd = row_syzygies(Pk, M.options());
    if (!same_row_module(dd, M.matrix(), M.options()))
        throw Error("not-a-parametrization",
                    "restricted columns no longer parametrize the system");
    // kernel of the restricted parametrization
    JetSystem ker = system_of(Pk);
    JanetBasis kb = complete_to_involution(ker, M.options());
    if (kb.chars.rank() > 0)
        throw Error("not-minimal", "kernel has differential rank " +
                                       std::to_string(kb.chars.rank()));
    return Pk;
}

namespace {

std::vector<MultiIndex> indices_up_to(int n, int ord) {
    std::vector<MultiIndex> out;
    MultiIndex mu(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == n) {
            out.push_back(mu);
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            mu[pos] = static_cast<std::uint32_t>(k);
            rec(pos + 1, rem - k);
        }
        mu[pos] = 0;
    };
    rec(0, ord);
    std::sort(out.begin(), out.end(), mono_greater);
    return out;
}

// ansatz operator matrix rows x cols, unknown polynomial coefficients
struct Ansatz {
    std::vector<MultiIndex> dmonos;
    std::vector<Exponents> xmonos;
    int rows, cols, nd, nvars;
    int id(int i, int j, int d, int x) const {
        return ((i * cols + j) * static_cast<int>(dmonos.size()) + d) *
                   static_cast<int>(xmonos.size()) +
               x;
    }
    LinOp entry(int i, int j) const {
        LinOp op(nd, nvars);
        for (std::size_t d = 0; d < dmonos.size(); ++d) {
            LinScalar c(nvars);
            for (std::size_t x = 0; x < xmonos.size(); ++x) {
                Poly mono(nvars);
                mono.add_term(xmonos[x], 1);
                c.add(LinScalar::unknown(id(i, j, static_cast<int>(d), static_cast<int>(x)),
                                         Scalar::of(mono)));
            }
            op.add_term(dmonos[d], c);
        }
        return op;
    }
    OpMatrix materialize(const std::vector<mpq_class>& sol) const {
        OpMatrix L(rows, cols, nd, nvars);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                ScalarOp e(nd, nvars);
                for (std::size_t d = 0; d < dmonos.size(); ++d) {
                    Poly p(nvars);
                    for (std::size_t x = 0; x < xmonos.size(); ++x) {
                        mpq_class v =
                            sol[id(i, j, static_cast<int>(d), static_cast<int>(x))];
                        if (v != 0) p.add_term(xmonos[x], v);
                    }
                    if (!p.is_zero()) e.add_term(dmonos[d], Scalar::of(p));
                }
                L.a[i][j] = e;
            }
        return L;
    }
};

std::optional<OpMatrix> solve_inverse_sized(const OpMatrix& A, bool right, int order_bound,
                                            int degree_bound) {
    int nd = A.nd, nvars = A.nvars;
    Ansatz an;
    an.dmonos = indices_up_to(nd, order_bound);
    an.xmonos = indices_up_to(nvars, degree_bound);
    an.nd = nd;
    an.nvars = nvars;
    an.rows = A.cols;
    an.cols = A.rows;
    int p = right ? A.rows : A.cols; // identity size
    QLinearSystem qs;
    qs.nunknowns = an.rows * an.cols * static_cast<int>(an.dmonos.size()) *
                   static_cast<int>(an.xmonos.size());
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            LinOp acc(nd, nvars);
            int inner = right ? A.cols : A.rows;
            for (int l = 0; l < inner; ++l) {
                if (right)
                    acc.add(compose_known_lin(A.a[i][l], an.entry(l, j)));
                else
                    acc.add(compose_lin_known(an.entry(i, l), A.a[l][j]));
            }
            // acc must equal delta_ij
            if (i == j) {
                LinScalar minus_one(-Scalar::one(nvars));
                acc.add_term(MultiIndex(nd, 0), minus_one);
            }
            for (auto& [mu, c] : acc.terms) qs.require_zero(c);
        }
    auto sol = qs.particular_solution();
    if (!sol) return std::nullopt;
    OpMatrix L = an.materialize(*sol);
    OpMatrix check = right ? matrix_compose(A, L) : matrix_compose(L, A);
    if (!(check == OpMatrix::identity(p, nd, nvars)))
        throw Error("internal", "inverse candidate fails verification");
    return L;
}

// smallest ansatz first, so the canonical low-order solution is preferred
std::optional<OpMatrix> solve_inverse(const OpMatrix& A, bool right, int order_bound,
                                      int degree_bound) {
    for (int ord = 0; ord <= order_bound; ++ord)
        for (int deg = 0; deg <= degree_bound; ++deg)
            if (auto L = solve_inverse_sized(A, right, ord, deg)) return L;
    return std::nullopt;
}

} // namespace

std::optional<OpMatrix> right_inverse(const OpMatrix& A, int order_bound, int degree_bound) {
    return solve_inverse(A, true, order_bound, degree_bound);
}

std::optional<OpMatrix> left_inverse(const OpMatrix& A, int order_bound, int degree_bound) {
    return solve_inverse(A, false, order_bound, degree_bound);
}

std::optional<OpMatrix> lift_check(const OpMatrix& D1, const OpMatrix& D, int order_bound,
                                   int degree_bound) {
    if (D.rows && D1.cols != D.rows && D1.cols != D.cols)
        throw Error("shape", "lift pair shapes do not chain");
    return right_inverse(D1, order_bound, degree_bound);
}

} // namespace purkit
