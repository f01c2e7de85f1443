#include "purkit/purity.hpp"

#include "purkit/error.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace purkit {

namespace {

std::string jet_label(const Jet& j, const std::vector<std::string>& unknowns) {
    if (mi_order(j.mu) == 0) return unknowns[j.k];
    std::ostringstream out;
    out << unknowns[j.k] << "_";
    for (std::size_t i = 0; i < j.mu.size(); ++i)
        for (std::uint32_t k = 0; k < j.mu[i]; ++k) out << (i + 1);
    return out.str();
}

std::vector<Jet> witness_jets(int n, int m, int q) {
    std::vector<Jet> jets;
    MultiIndex mu(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == n) {
            for (int k = 0; k < m; ++k) jets.push_back(Jet{k, mu});
            return;
        }
        for (int d = 0; d <= rem; ++d) {
            mu[pos] = static_cast<std::uint32_t>(d);
            rec(pos + 1, rem - d);
        }
        mu[pos] = 0;
    };
    rec(0, std::max(0, q - 1));
    std::sort(jets.begin(), jets.end(), [](const Jet& a, const Jet& b) {
        if (a.k != b.k) return a.k < b.k;
        return jet_greater(b, a);
    });
    return jets;
}

} // namespace

PurityReport purity_filtration(ModuleHandle& M) {
    PurityReport rep;
    const JanetBasis& basis = M.basis();
    const JetSystem& sys = M.presentation();
    int n = sys.nd;
    rep.n = n;
    rep.codim = M.codim();
    rep.dim = M.dim();
    rep.rank = M.rank();

    // witnesses: jets below the system order plus any torsion generators
    for (auto& jt : witness_jets(n, sys.m, std::max(1, basis.q))) {
        LinearForm f(sys.nd, sys.nvars, sys.m);
        f.add_term(jt, Scalar::one(sys.nvars));
        if (reduces_to_zero(adapt_row(f, basis), basis)) continue;
        PurityWitness w;
        w.name = jet_label(jt, sys.unknown_names);
        w.element = f;
        w.codim = element_codimension(f, sys, M.options());
        rep.witnesses.push_back(std::move(w));
    }
    if (rep.rank > 0) {
        TorsionReport tr = torsion_test(M);
        int t = 0;
        for (auto& g : tr.generators) {
            PurityWitness w;
            w.name = "t" + std::to_string(++t);
            w.element = g.element;
            w.codim = element_codimension(g.element, sys, M.options());
            bool dup = false;
            for (auto& v : rep.witnesses)
                if (v.element.same_terms(w.element)) dup = true;
            if (!dup) rep.witnesses.push_back(std::move(w));
        }
    }

    rep.step_strict.assign(n + 1, false); // index r = step t_r < t_{r-1}, r = 1..n
    for (auto& w : rep.witnesses)
        if (w.codim >= 1 && w.codim <= n) rep.step_strict[w.codim] = true;
    rep.top_strict = rep.rank > 0;
    rep.has_gap = false;
    for (int r = 1; r <= n; ++r) {
        if (rep.step_strict[r]) continue;
        bool above = false; // t_r nonzero: witness of codim > r
        for (auto& w : rep.witnesses)
            if (w.codim > r) above = true;
        if (above) rep.has_gap = true;
    }

    std::ostringstream chain;
    chain << "0 = t" << n;
    for (int r = n; r >= 1; --r)
        chain << (rep.step_strict[r] ? " < " : " = ") << "t" << (r - 1);
    chain << (rep.top_strict ? " < M" : " = M");
    rep.chain = chain.str();
    return rep;
}

namespace {

struct StepData {
    SpencerForm sf;
    int full = 0;
    std::optional<TorsionReport> sub_torsion;
    std::optional<ModuleHandle> sub;
};

StepData run_steps(ModuleHandle& M) {
    StepData st;
    st.sf = first_order_form(M.basis(), M.options());
    st.full = full_classes(st.sf);
    int n = M.presentation().nd;
    if (st.full < n) {
        JetSystem sub = subsystem_by_classes(st.sf, st.full);
        st.sub = ModuleHandle(sub, M.options());
        st.sub_torsion = torsion_test(*st.sub);
    }
    return st;
}

} // namespace

PurityReport purity_test(ModuleHandle& M) {
    PurityReport rep = purity_filtration(M);
    StepData st = run_steps(M);
    rep.full_classes = st.full;
    int n = rep.n;
    if (st.full == n) {
        rep.pure = true;
        rep.pure_r = n;
        return rep;
    }
    if (st.sub_torsion->verdict == TorsionVerdict::torsion_free) {
        rep.pure = true;
        rep.pure_r = st.full;
    } else {
        rep.pure = false;
        for (auto& g : st.sub_torsion->generators) {
            LinearForm orig = dictionary_substitute(st.sf, g.element);
            std::vector<std::string> vars;
            for (int i = 1; i <= M.presentation().nvars; ++i)
                vars.push_back("x" + std::to_string(i));
            rep.offending.push_back(orig.str(M.presentation().unknown_names, vars));
        }
    }
    return rep;
}

RelativeParametrization relative_parametrization(ModuleHandle& M, bool best_effort,
                                                 int membership_order_bound) {
    PurityReport pt = purity_test(M);
    if (!pt.pure && !best_effort)
        throw Error("not-pure", "module is not pure; no relative parametrization");
    StepData st = run_steps(M);
    if (st.full >= M.presentation().nd)
        throw Error("not-pure", "finite-type module has no parametrizable subsystem");
    if (st.sub_torsion->verdict != TorsionVerdict::torsion_free && !best_effort)
        throw Error("not-pure", "low-class subsystem has torsion");
    if (!st.sub_torsion->certified_parametrization)
        throw Error("not-pure", "no certified parametrization of the subsystem");

    RelativeParametrization out;
    out.spencer = st.sf;
    int n = M.presentation().nd, nvars = M.presentation().nvars;
    OpMatrix P2 = *st.sub_torsion->certified_parametrization; // (n-r)-variable ops
    // lift the subsystem parametrization into the full operator ring
    OpMatrix P(P2.rows, P2.cols, n, nvars);
    for (int i = 0; i < P2.rows; ++i)
        for (int j = 0; j < P2.cols; ++j)
            for (auto& [mu, a] : P2.a[i][j].terms()) {
                MultiIndex full(n, 0);
                for (std::size_t t = 0; t < mu.size(); ++t) full[t] = mu[t];
                P.a[i][j].add_term(full, a);
            }
    // column normalization by rational constants only
    for (int j = 0; j < P.cols; ++j) {
        for (int i = 0; i < P.rows; ++i) {
            if (P.a[i][j].is_zero()) continue;
            const Scalar& lc = P.a[i][j].terms().begin()->second;
            if (lc.num().is_constant() && lc.den().is_constant()) {
                Scalar inv = lc.inv();
                for (int r = 0; r < P.rows; ++r) P.a[r][j] = P.a[r][j].scale(inv);
            }
            break;
        }
    }
    out.parametrization = P;
    // a column with an identity entry at row k is the potential z_k itself
    std::vector<bool> taken(P.rows, false);
    for (int j = 0; j < P.cols; ++j) {
        int named = -1;
        for (int i = 0; i < P.rows && named < 0; ++i) {
            if (taken[i] || P.a[i][j].is_zero() || P.a[i][j].order() != 0) continue;
            if (P.a[i][j].terms().begin()->second.is_one()) named = i;
        }
        if (named >= 0) {
            taken[named] = true;
            out.potentials.push_back(st.sf.names[named]);
        } else {
            out.potentials.push_back("phi" + std::to_string(j + 1));
        }
    }
    std::vector<std::string> vars;
    for (int i = 1; i <= nvars; ++i) vars.push_back("x" + std::to_string(i));
    std::vector<LinearForm> exprs;
    for (int k = 0; k < P.rows; ++k) exprs.push_back(row_from_ops(P.a[k]));
    for (int k = 0; k < P.rows; ++k)
        out.ops.push_back(st.sf.names[k] + " = " + exprs[k].str(out.potentials, vars));

    // substitute into the discarded (high-class) equations
    std::vector<LinearForm> high;
    for (auto& br : st.sf.basis.rows)
        if (br.cls == 0 || br.cls > n - st.full) high.push_back(br.row);
    OpMatrix H = matrix_from_rows(high, st.sf.unknowns(), n, nvars);
    std::vector<LinearForm> constraints = matrix_apply(H, exprs);
    JetSystem L(n, nvars, P.cols);
    L.unknown_names = out.potentials;
    for (auto& c : constraints)
        if (!c.is_zero()) L.equations.push_back(c);
    L.default_names();
    out.constraints = complete_to_involution(L, M.options());
    out.resolution_operators = static_cast<int>(free_resolution(L, M.options()).maps.size());

    // inclusion: is every potential expressible in the original generators?
    // generators of M sit at the order-0 dictionary slots
    std::vector<int> gen_slots;
    for (int k = 0; k < st.sf.unknowns(); ++k)
        if (st.sf.dictionary[k].order() == 0 && st.sf.dictionary[k].terms().size() == 1)
            if (st.sf.dictionary[k].terms().begin()->second.is_one()) gen_slots.push_back(k);
    auto mus = [&]() {
        std::vector<MultiIndex> out_mu;
        MultiIndex mu(n, 0);
        std::function<void(int, int)> rec = [&](int pos, int rem) {
            if (pos == n) {
                out_mu.push_back(mu);
                return;
            }
            for (int d = 0; d <= rem; ++d) {
                mu[pos] = static_cast<std::uint32_t>(d);
                rec(pos + 1, rem - d);
            }
            mu[pos] = 0;
        };
        rec(0, membership_order_bound);
        return out_mu;
    }();
    for (int j = 0; j < P.cols; ++j) {
        LinFormExpr expr(n, nvars, P.cols);
        LinScalar one(Scalar::one(nvars));
        LinearForm probe(n, nvars, P.cols);
        probe.add_term(Jet{j, MultiIndex(n, 0)}, Scalar::one(nvars));
        expr.add_scaled(adapt_row(probe, out.constraints), one);
        KLinearSystem ks;
        int id = 0;
        for (int gs : gen_slots) {
            LinearForm gexpr = adapt_row(exprs[gs], out.constraints);
            for (auto& mu : mus) {
                LinearForm pr = gexpr.prolong_by(mu);
                pr.cert.clear();
                LinScalar neg = LinScalar::unknown(id++, -Scalar::one(nvars));
                expr.add_scaled(pr, neg);
            }
        }
        ks.nunknowns = id;
        LinFormExpr red = normal_form_lin(expr, out.constraints);
        for (auto& [jet, c] : red.terms) ks.require_zero(c);
        auto sol = ks.particular_solution(nvars);
        if (!sol) {
            out.inclusion_equal = false;
            out.strict_witnesses.push_back(out.potentials[j]);
        }
    }
    return out;
}

ConstrainedCheck constrained_parametrization_check(const OpMatrix& P, const OpMatrix& C,
                                                  ModuleHandle& target) {
    if (C.rows > 0 && C.cols != P.cols)
        throw Error("shape", "constraints and parametrization differ in potentials");
    ConstrainedCheck out;
    JetSystem stacked(P.nd, P.nvars, P.cols);
    for (auto& r : rows_from_matrix(C)) stacked.equations.push_back(r);
    for (auto& r : rows_from_matrix(P)) stacked.equations.push_back(r);
    stacked.default_names();
    JanetBasis b = complete_to_involution(stacked, target.options());
    out.stacked = b;
    OpMatrix syz = row_syzygies(
        matrix_from_rows(stacked.equations, stacked.m, stacked.nd, stacked.nvars),
        target.options());
    // keep only the parametrized-side slots
    OpMatrix proj(0, P.rows, P.nd, P.nvars);
    for (int i = 0; i < syz.rows; ++i) {
        std::vector<ScalarOp> row(P.rows, ScalarOp(P.nd, P.nvars));
        bool nz = false;
        for (int t = 0; t < P.rows; ++t) {
            row[t] = syz.a[i][C.rows + t];
            nz = nz || !row[t].is_zero();
        }
        if (nz) {
            proj.a.push_back(std::move(row));
            proj.rows++;
        }
    }
    proj = minimize_rows(proj);
    out.generated_cc = proj;
    out.matches_target = same_row_module(proj, target.matrix(), target.options());
    return out;
}

} // namespace purkit
