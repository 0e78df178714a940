#include "grl/dl_enumerate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "grl/dl_eval.hpp"
#include "grl/error.hpp"

namespace grl::dl {

namespace {

using Signature = std::vector<unsigned long>;

void append_blocks(Signature& sig, const ObjectSet& s) {
    boost::to_block_range(s, std::back_inserter(sig));
}

struct RoleEntry {
    Role role;
    std::vector<const std::vector<ObjectSet>*> rows; // per sample
};

struct ConceptEntry {
    Concept concept_expr;
    std::vector<ObjectSet> den; // per sample
};

class Enumerator {
public:
    Enumerator(const Domain& domain, const ObjectUniverse& universe, std::span<const RelationalState> samples)
        : n_(universe.size()) {
        for (const auto& s : samples) interps_.emplace_back(domain, universe, s);
        for (const auto& p : domain.predicates()) {
            if (p.arity == 1) unary_.push_back(p.name);
            if (p.arity == 2) binary_.push_back(p.name);
        }
        std::sort(unary_.begin(), unary_.end());
        std::sort(binary_.begin(), binary_.end());
    }

    std::vector<Feature> run(int k) {
        build_roles();
        concepts_.resize(static_cast<std::size_t>(k) + 1);
        for (int c = 1; c <= k; ++c) build_concepts(c);

        std::vector<Feature> out;
        for (int c = 1; c <= k; ++c)
            for (const auto& e : concepts_[static_cast<std::size_t>(c)]) out.emplace_back(e.concept_expr);
        add_distances(k, out);
        std::sort(out.begin(), out.end(), canonical_less);
        for (std::size_t i = 0; i < out.size(); ++i) out[i].id = i;
        return out;
    }

private:
    void build_roles() {
        std::vector<Role> candidates;
        for (const auto& b : binary_) candidates.emplace_back(b);
        for (const auto& b : binary_) candidates.emplace_back(b, true);
        std::set<Signature> seen;
        for (const auto& r : candidates) {
            RoleEntry e{r, {}};
            Signature sig;
            for (const auto& in : interps_) {
                e.rows.push_back(&in.relation(r));
                for (const auto& row : in.relation(r)) append_blocks(sig, row);
            }
            if (seen.insert(sig).second) roles_.push_back(std::move(e));
        }
    }

    std::vector<const RoleEntry*> roles_of(int complexity) const {
        std::vector<const RoleEntry*> out;
        for (const auto& r : roles_)
            if (r.role.complexity() == complexity) out.push_back(&r);
        return out;
    }

    void build_concepts(int c) {
        std::map<std::string, ConceptEntry> candidates;
        auto add = [&](ConceptEntry e) {
            std::string key = e.concept_expr.str();
            candidates.emplace(std::move(key), std::move(e));
        };
        const std::size_t m = interps_.size();

        if (c == 1) {
            ConceptEntry top{Concept::top(), {}};
            for (std::size_t s = 0; s < m; ++s) top.den.push_back(ObjectSet(n_).set());
            add(std::move(top));
            for (const auto& p : unary_) {
                ConceptEntry e{Concept::primitive(p), {}};
                for (const auto& in : interps_) e.den.push_back(in.unary(p));
                add(std::move(e));
            }
        } else {
            for (const auto& a : concepts_[c - 1]) {
                ConceptEntry e{Concept::negation(a.concept_expr), {}};
                for (const auto& d : a.den) e.den.push_back(~d);
                add(std::move(e));
            }
            for (int ca = 1; ca <= (c - 1) / 2; ++ca) {
                const int cb = c - 1 - ca;
                const auto& la = concepts_[ca];
                const auto& lb = concepts_[cb];
                for (std::size_t i = 0; i < la.size(); ++i)
                    for (std::size_t j = (ca == cb ? i + 1 : 0); j < lb.size(); ++j) {
                        ConceptEntry e{Concept::conjunction(la[i].concept_expr, lb[j].concept_expr), {}};
                        for (std::size_t s = 0; s < m; ++s) e.den.push_back(la[i].den[s] & lb[j].den[s]);
                        add(std::move(e));
                    }
            }
            for (int cr = 1; cr <= 2; ++cr) {
                const int cc = c - 1 - cr;
                if (cc < 1) continue;
                for (const RoleEntry* r : roles_of(cr))
                    for (const auto& inner : concepts_[cc]) {
                        ConceptEntry ex{Concept::exists(r->role, inner.concept_expr), {}};
                        ConceptEntry fa{Concept::forall(r->role, inner.concept_expr), {}};
                        for (std::size_t s = 0; s < m; ++s) {
                            const auto& rows = *r->rows[s];
                            ObjectSet de(n_), df(n_);
                            for (std::size_t x = 0; x < n_; ++x) {
                                de[x] = rows[x].intersects(inner.den[s]);
                                df[x] = rows[x].is_subset_of(inner.den[s]);
                            }
                            ex.den.push_back(std::move(de));
                            fa.den.push_back(std::move(df));
                        }
                        add(std::move(ex));
                        add(std::move(fa));
                    }
            }
            for (int cr = 1; cr <= 2; ++cr) {
                const int cs = c - 1 - cr;
                if (cs < cr || cs > 2) continue;
                auto left = roles_of(cr), right = roles_of(cs);
                for (const RoleEntry* r : left)
                    for (const RoleEntry* q : right) {
                        if (cr == cs && !(r->role.str() < q->role.str())) continue;
                        ConceptEntry e{Concept::role_equality(r->role, q->role), {}};
                        for (std::size_t s = 0; s < m; ++s) {
                            ObjectSet d(n_);
                            for (std::size_t x = 0; x < n_; ++x) d[x] = (*r->rows[s])[x] == (*q->rows[s])[x];
                            e.den.push_back(std::move(d));
                        }
                        add(std::move(e));
                    }
            }
        }

        // std::map iterates in serialized order, giving the lexicographic tie-break.
        for (auto& [key, e] : candidates) {
            Signature sig;
            for (const auto& d : e.den) append_blocks(sig, d);
            if (concept_signatures_.insert(std::move(sig)).second) concepts_[c].push_back(std::move(e));
        }
    }

    void add_distances(int k, std::vector<Feature>& out) {
        struct Candidate {
            Feature feature;
            std::vector<int> values;
        };
        std::vector<Candidate> candidates;
        for (int total = 4; total <= k; ++total) {
            for (int cr = 1; cr <= 2; ++cr)
                for (int ca = 1; ca + cr + 1 <= total - 1; ++ca) {
                    const int cb = total - 1 - cr - ca;
                    if (cb < 1 || static_cast<std::size_t>(cb) >= concepts_.size()) continue;
                    for (const RoleEntry* r : roles_of(cr))
                        for (const auto& a : concepts_[ca])
                            for (const auto& b : concepts_[cb]) {
                                Candidate cand{Feature(DistanceFeature{a.concept_expr, r->role, b.concept_expr}), {}};
                                for (std::size_t s = 0; s < interps_.size(); ++s)
                                    cand.values.push_back(shortest_distance(a.den[s], *r->rows[s], b.den[s]));
                                candidates.push_back(std::move(cand));
                            }
                }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& x, const Candidate& y) { return canonical_less(x.feature, y.feature); });
        std::set<std::vector<int>> seen;
        for (auto& c : candidates)
            if (seen.insert(c.values).second) out.push_back(std::move(c.feature));
    }

    std::size_t n_;
    std::vector<Interpretation> interps_;
    std::vector<std::string> unary_, binary_;
    std::vector<RoleEntry> roles_;
    std::vector<std::vector<ConceptEntry>> concepts_;
    std::set<Signature> concept_signatures_;
};

} // namespace

std::vector<Feature> enumerate_features(const Domain& domain, const ObjectUniverse& universe,
                                        std::span<const RelationalState> samples, int max_complexity) {
    if (samples.empty()) throw ValidationError("feature enumeration needs at least one sampled state");
    if (max_complexity < 1) throw ValidationError("complexity bound must be at least 1");
    Enumerator e(domain, universe, samples);
    return e.run(max_complexity);
}

} // namespace grl::dl
