#include "purkit/spencer.hpp"

#include "purkit/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace purkit {

namespace {

std::vector<Jet> sub_order_jets(int n, int m, int q) {
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
    rec(0, q - 1);
    // per unknown, lower jets first
    std::sort(jets.begin(), jets.end(), [](const Jet& a, const Jet& b) {
        if (a.k != b.k) return a.k < b.k;
        return jet_greater(b, a);
    });
    return jets;
}

} // namespace

SpencerForm first_order_form(const JanetBasis& basis, const CompletionOptions& opt) {
    int n = basis.n(), m = basis.m(), nvars = basis.nvars();
    int q = std::max(1, basis.q);
    SpencerForm sf;
    auto jets = sub_order_jets(n, m, q);
    std::map<Jet, int, JetCmp> slot;
    for (int j = 0; j < static_cast<int>(jets.size()); ++j) {
        slot[jets[j]] = j;
        LinearForm d(n, nvars, m);
        d.add_term(jets[j], Scalar::one(nvars));
        sf.dictionary.push_back(d);
        sf.names.push_back(q == 1 ? basis.input.unknown_names[jets[j].k]
                                  : "z" + std::to_string(j + 1));
    }
    int mz = static_cast<int>(jets.size());

    // canonical first-order writing of an order-q jet: differentiate by the
    // class of its multi-index
    auto canon = [&](const Jet& jt) {
        int c = mi_class(jt.mu);
        Jet base = jt;
        base.mu[c - 1]--;
        return std::pair<int, int>(slot.at(base), c);
    };
    auto rewrite = [&](const LinearForm& f) {
        LinearForm out(n, nvars, mz);
        for (auto& [jt, a] : f.terms()) {
            if (mi_order(jt.mu) <= q - 1) {
                out.add_term(Jet{slot.at(jt), MultiIndex(n, 0)}, a);
            } else {
                auto [zi, c] = canon(jt);
                MultiIndex mu(n, 0);
                mu[c - 1] = 1;
                out.add_term(Jet{zi, mu}, a);
            }
        }
        return out;
    };

    JetSystem zsys(n, nvars, mz);
    zsys.unknown_names = sf.names;
    for (auto& jt : jets) {
        if (mi_order(jt.mu) > q - 2) continue;
        for (int i = 1; i <= n; ++i) {
            Jet up = jt;
            up.mu[i - 1]++;
            LinearForm row(n, nvars, mz);
            MultiIndex di(n, 0);
            di[i - 1] = 1;
            row.add_term(Jet{slot.at(jt), di}, Scalar::one(nvars));
            row.add_term(Jet{slot.at(up), MultiIndex(n, 0)}, -Scalar::one(nvars));
            zsys.equations.push_back(std::move(row));
        }
    }
    for (auto& jt : jets) {
        if (mi_order(jt.mu) != q - 1) continue;
        for (int i = 1; i <= n; ++i) {
            Jet up = jt;
            up.mu[i - 1]++;
            LinearForm probe(n, nvars, m);
            probe.add_term(up, Scalar::one(nvars));
            LinearForm nf = normal_form(probe, basis);
            bool parametric = nf.terms().size() == 1 && nf.terms().begin()->first == up &&
                              nf.terms().begin()->second.is_one();
            MultiIndex di(n, 0);
            di[i - 1] = 1;
            if (!parametric) {
                LinearForm row(n, nvars, mz);
                row.add_term(Jet{slot.at(jt), di}, Scalar::one(nvars));
                row.add(rewrite(nf), -Scalar::one(nvars));
                zsys.equations.push_back(std::move(row));
            } else {
                auto [zi, c] = canon(up);
                if (zi == slot.at(jt) && c == i) continue; // the defining derivative
                LinearForm row(n, nvars, mz);
                row.add_term(Jet{slot.at(jt), di}, Scalar::one(nvars));
                MultiIndex dc(n, 0);
                dc[c - 1] = 1;
                row.add_term(Jet{zi, dc}, -Scalar::one(nvars));
                zsys.equations.push_back(std::move(row));
            }
        }
    }
    for (auto& r : basis.rows)
        if (r.row.order() < q) zsys.equations.push_back(rewrite(r.row));

    zsys.default_names();
    sf.z_system = zsys;
    sf.basis = complete_to_involution(zsys, opt);
    for (auto& r : sf.basis.rows) {
        if (r.cls == n && r.row.order() == 1) sf.solved.push_back(r.row.leading_jet().k);
    }
    std::sort(sf.solved.begin(), sf.solved.end());
    sf.beta = static_cast<int>(sf.solved.size());
    return sf;
}

SpencerForm reduce_spencer(const SpencerForm& sf, const CompletionOptions& opt) {
    int n = sf.n(), nvars = sf.z_system.nvars, mz = sf.unknowns();
    for (auto& r : sf.basis.rows)
        if (r.row.order() == 0)
            throw Error("zero-order-equation", "reduced form needs a first-order system");
    std::vector<bool> is_solved(mz, false);
    for (int k : sf.solved) is_solved[k] = true;

    SpencerForm out = sf;
    std::vector<LinearForm> rows;
    for (auto& r : sf.basis.rows) {
        LinearForm f = r.row;
        f.cert.clear();
        rows.push_back(std::move(f));
    }

    int guard = 0;
    MultiIndex dn(n, 0);
    dn[n - 1] = 1;
    while (true) {
        if (++guard > mz * mz + 8) throw Error("internal", "reduction did not settle");
        int row_idx = -1, bad = -1;
        Scalar cf = Scalar::zero(nvars);
        for (std::size_t i = 0; i < rows.size() && row_idx < 0; ++i) {
            if (rows[i].order() != 1 || rows[i].leading_class() != n) continue;
            for (auto& [jt, a] : rows[i].terms()) {
                if (jt.mu == dn && !is_solved[jt.k]) {
                    row_idx = static_cast<int>(i);
                    bad = jt.k;
                    cf = a;
                    break;
                }
            }
        }
        if (row_idx < 0) break;
        int solved_k = rows[row_idx].leading_jet().k;
        // z_solved = zbar - cf * z_bad, absorbed via d_n(cf z_bad)
        LinearForm repl(n, nvars, mz);
        repl.add_term(Jet{solved_k, MultiIndex(n, 0)}, Scalar::one(nvars));
        repl.add_term(Jet{bad, MultiIndex(n, 0)}, -cf);
        for (auto& r : rows) {
            LinearForm nr(n, nvars, mz);
            for (auto& [jt, a] : r.terms()) {
                if (jt.k != solved_k)
                    nr.add_term(jt, a);
                else
                    nr.add(repl.prolong_by(jt.mu), a);
            }
            r = nr;
        }
        LinearForm ndict = out.dictionary[solved_k];
        ndict.add(out.dictionary[bad], cf);
        out.dictionary[solved_k] = ndict;
        std::ostringstream note;
        note << out.names[solved_k] << " <- " << out.names[solved_k] << " + (" << cf.str()
             << ")*" << out.names[bad];
        out.substitutions.push_back(note.str());
        if (out.names[solved_k].find('~') == std::string::npos) out.names[solved_k] += "~";
    }

    JetSystem zsys = sf.z_system;
    zsys.equations = rows;
    zsys.unknown_names = out.names;
    zsys.labels.clear();
    zsys.default_names();
    out.z_system = zsys;
    out.basis = complete_to_involution(zsys, opt);
    out.solved.clear();
    for (auto& r : out.basis.rows)
        if (r.cls == n && r.row.order() == 1) out.solved.push_back(r.row.leading_jet().k);
    std::sort(out.solved.begin(), out.solved.end());
    out.beta = static_cast<int>(out.solved.size());
    return out;
}

JetSystem subsystem_by_classes(const SpencerForm& sf, int r) {
    int n = sf.n();
    if (r < 0 || r > n) throw Error("shape", "class selection out of range");
    if (r == 0) {
        JetSystem out = sf.z_system;
        out.equations.clear();
        for (auto& br : sf.basis.rows) {
            LinearForm f = br.row;
            f.cert.clear();
            out.equations.push_back(std::move(f));
        }
        out.labels.clear();
        out.default_names();
        return out;
    }
    int nd = n - r;
    JetSystem out(nd, sf.z_system.nvars, sf.unknowns());
    out.unknown_names = sf.names;
    for (auto& br : sf.basis.rows) {
        if (br.cls < 1 || br.cls > nd) continue;
        LinearForm ne(nd, sf.z_system.nvars, sf.unknowns());
        for (auto& [jt, a] : br.row.terms()) {
            MultiIndex mu(nd, 0);
            for (int i = 0; i < n; ++i) {
                if (jt.mu[i] == 0) continue;
                if (i >= nd)
                    throw Error("internal", "low-class equation uses a high derivation");
                mu[i] = jt.mu[i];
            }
            ne.add_term(Jet{jt.k, mu}, a);
        }
        out.equations.push_back(std::move(ne));
    }
    out.labels.clear();
    out.default_names();
    return out;
}

int full_classes(const SpencerForm& sf) {
    int r = 0;
    for (int i = sf.n(); i >= 1; --i) {
        if (sf.basis.chars.alpha[i - 1] == 0)
            ++r;
        else
            break;
    }
    return r;
}

LinearForm dictionary_substitute(const SpencerForm& sf, const LinearForm& zrow) {
    int n = sf.n(), nvars = sf.z_system.nvars;
    int m = sf.dictionary.empty() ? 0 : sf.dictionary[0].unknowns();
    LinearForm out(n, nvars, m);
    for (auto& [jt, a] : zrow.terms()) {
        LinearForm pr = sf.dictionary[jt.k].prolong_by(jt.mu);
        out.add(pr, a);
    }
    return out;
}

bool reduced_form_shape_ok(const SpencerForm& sf) {
    int n = sf.n();
    std::vector<bool> solved(sf.unknowns(), false);
    for (int k : sf.solved) solved[k] = true;
    for (auto& br : sf.basis.rows) {
        for (auto& [jt, a] : br.row.terms()) {
            if (solved[jt.k]) continue;
            if (br.cls == n) {
                if (mi_order(jt.mu) >= 1 && mi_class(jt.mu) == n) return false;
            } else if (br.cls >= 1) {
                return false;
            }
        }
    }
    return true;
}

} // namespace purkit
