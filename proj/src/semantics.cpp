#include "ctlab/semantics.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <mutex>
#include <unordered_map>

#include "ctlab/error.hpp"

namespace ctlab {

const char* semantics_name(Semantics s) { return s == Semantics::causal ? "c" : "g"; }

SubteamFamily::SubteamFamily(std::size_t universe_size)
    : n_(universe_size), bits_(((std::size_t{1} << universe_size) + 63) / 64, 0)
{
}

std::uint64_t SubteamFamily::count() const
{
    std::uint64_t c = 0;
    for (auto w : bits_)
        c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
}

SubteamFamily& SubteamFamily::operator&=(const SubteamFamily& o)
{
    for (std::size_t i = 0; i < bits_.size(); ++i)
        bits_[i] &= o.bits_[i];
    return *this;
}

SubteamFamily& SubteamFamily::operator|=(const SubteamFamily& o)
{
    for (std::size_t i = 0; i < bits_.size(); ++i)
        bits_[i] |= o.bits_[i];
    return *this;
}

namespace {

struct IntsHash {
    std::size_t operator()(const std::vector<int>& xs) const noexcept
    {
        std::size_t h = xs.size();
        for (int x : xs)
            h = hash_combine(h, static_cast<std::size_t>(x));
        return h;
    }
};

struct FNode {
    Kind kind = Kind::Eq;
    bool co = true;
    int a = -1;
    int b = -1;
    int var = -1;
    int value = -1;
    std::vector<int> dets;
    int spec = -1;  // -1: inconsistent antecedent
};

struct MemberRec {
    Assignment row;
    int law;
};

using Family = std::shared_ptr<const SubteamFamily>;

std::uint64_t pair_key(int a, int b)
{
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

struct SatContext::Impl {
    Limits limits;
    bool allow_mixed;
    std::recursive_mutex mu;
    SignaturePtr sig;

    std::vector<LawPtr> laws;  // canonical forms
    std::map<std::vector<int>, int> law_index;
    std::unordered_map<const FunctionSystem*, int> law_by_ptr;
    std::vector<LawPtr> pinned;

    std::vector<MemberRec> members;
    std::unordered_map<std::vector<int>, int, IntsHash> member_index;  // law, row...

    std::vector<InterventionSpec> specs;
    std::map<std::vector<Equality>, int> spec_index;
    std::unordered_map<std::uint64_t, int> law_after;     // (law, spec)
    std::unordered_map<std::uint64_t, int> member_after;  // (member, spec)

    std::vector<FNode> fnodes;
    std::unordered_map<Formula, int, FormulaHash> formula_index;

    std::unordered_map<std::uint64_t, bool> single_memo;  // (member, formula)
    std::unordered_map<std::vector<int>, bool, IntsHash> team_memo;  // formula, members...
    std::unordered_map<std::vector<int>, Family, IntsHash> family_memo;

    std::vector<Member> universe;
    std::vector<CausalClass> classes;
    bool classes_ready = false;

    Impl(Limits l, bool mixed) : limits(l), allow_mixed(mixed) {}

    void bind(const SignaturePtr& s)
    {
        if (!sig) {
            sig = s;
            return;
        }
        require_same_signature(sig, s);
    }

    int intern_law(const LawPtr& f)
    {
        if (auto it = law_by_ptr.find(f.get()); it != law_by_ptr.end())
            return it->second;
        if (!f->recursive())
            throw InvalidArgument("satisfaction is defined for recursive laws only");
        pinned.push_back(f);
        int id;
        if (auto it = law_index.find(f->canonical_key()); it != law_index.end()) {
            id = it->second;
        } else {
            id = static_cast<int>(laws.size());
            auto c = f->canonical() ? f : std::make_shared<const FunctionSystem>(canonicalize(*f).law);
            laws.push_back(c);
            law_index.emplace(f->canonical_key(), id);
            law_by_ptr.emplace(c.get(), id);
            pinned.push_back(c);
        }
        law_by_ptr.emplace(f.get(), id);
        return id;
    }

    int intern_member(const Assignment& row, int law)
    {
        std::vector<int> key;
        key.reserve(row.values.size() + 1);
        key.push_back(law);
        key.insert(key.end(), row.values.begin(), row.values.end());
        auto [it, fresh] = member_index.emplace(std::move(key), static_cast<int>(members.size()));
        if (fresh)
            members.push_back(MemberRec{row, law});
        return it->second;
    }

    int intern_member(const Member& m) { return intern_member(m.row, intern_law(m.law)); }

    std::vector<int> intern_team(const GeneralizedCausalTeam& t)
    {
        bind(t.signature());
        std::vector<int> ids;
        ids.reserve(t.size());
        for (const auto& m : t.members())
            ids.push_back(intern_member(m));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }

    int intern_spec(const InterventionSpec& iv)
    {
        auto norm = iv.normalized();
        auto [it, fresh] = spec_index.emplace(norm, static_cast<int>(specs.size()));
        if (fresh)
            specs.emplace_back(std::move(norm));
        return it->second;
    }

    int intern_formula(const Formula& f)
    {
        if (auto it = formula_index.find(f); it != formula_index.end())
            return it->second;
        FNode n;
        n.kind = f.kind();
        n.co = f.is_co();
        switch (f.kind()) {
        case Kind::Eq:
            n.var = f.var();
            n.value = f.value();
            break;
        case Kind::Dep:
            n.var = f.var();
            n.dets = f.determinants();
            break;
        case Kind::Neg: n.a = intern_formula(f.operand()); break;
        case Kind::Cf:
            n.a = intern_formula(f.operand());
            n.spec = f.antecedent().consistent() ? intern_spec(f.antecedent()) : -1;
            break;
        default:
            n.a = intern_formula(f.lhs());
            n.b = intern_formula(f.rhs());
        }
        const int id = static_cast<int>(fnodes.size());
        fnodes.push_back(std::move(n));
        formula_index.emplace(f, id);
        return id;
    }

    int prepare(const Formula& f)
    {
        if (f.language() == Language::NONE && !allow_mixed)
            throw InvalidArgument("formula mixes dependence atoms and global disjunction");
        if (sig)
            validate(f, *sig);
        return intern_formula(f);
    }

    int law_intervened(int law, int spec)
    {
        const auto key = pair_key(law, spec);
        if (auto it = law_after.find(key); it != law_after.end())
            return it->second;
        auto g = std::make_shared<const FunctionSystem>(intervene_law(*laws[static_cast<std::size_t>(law)],
                                                                      specs[static_cast<std::size_t>(spec)]));
        const int id = intern_law(g);
        law_after.emplace(key, id);
        return id;
    }

    int intervened(int m, int spec)
    {
        const auto key = pair_key(m, spec);
        if (auto it = member_after.find(key); it != member_after.end())
            return it->second;
        const int law = members[static_cast<std::size_t>(m)].law;
        Assignment row = intervene_row(members[static_cast<std::size_t>(m)].row, *laws[static_cast<std::size_t>(law)],
                                       specs[static_cast<std::size_t>(spec)]);
        const int id = intern_member(row, law_intervened(law, spec));
        member_after.emplace(key, id);
        return id;
    }

    // Singleton clauses: a split of {m} puts m on one side, dep holds trivially.
    bool sat1(int m, int fid)
    {
        const auto key = pair_key(m, fid);
        if (auto it = single_memo.find(key); it != single_memo.end())
            return it->second;
        const FNode& n = fnodes[static_cast<std::size_t>(fid)];
        bool r = false;
        switch (n.kind) {
        case Kind::Eq: r = members[static_cast<std::size_t>(m)].row[n.var] == n.value; break;
        case Kind::Dep: r = true; break;
        case Kind::Neg: r = !sat1(m, n.a); break;
        case Kind::And: r = sat1(m, n.a) && sat1(m, n.b); break;
        case Kind::Tensor:
        case Kind::Global: r = sat1(m, n.a) || sat1(m, n.b); break;
        case Kind::Cf: r = n.spec < 0 || sat1(intervened(m, n.spec), n.a); break;
        }
        single_memo.emplace(key, r);
        return r;
    }

    bool dep_holds(const std::vector<int>& team, const FNode& n)
    {
        for (std::size_t i = 0; i < team.size(); ++i)
            for (std::size_t j = i + 1; j < team.size(); ++j)
                if (conflict(team[i], team[j], n))
                    return false;
        return true;
    }

    bool conflict(int x, int y, const FNode& n) const
    {
        const auto& s = members[static_cast<std::size_t>(x)].row;
        const auto& t = members[static_cast<std::size_t>(y)].row;
        if (s[n.var] == t[n.var])
            return false;
        for (int d : n.dets)
            if (s[d] != t[d])
                return false;
        return true;
    }

    std::vector<int> image(const std::vector<int>& team, int spec)
    {
        std::vector<int> out;
        out.reserve(team.size());
        for (int m : team)
            out.push_back(intervened(m, spec));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // team is sorted and duplicate-free.
    bool sat(const std::vector<int>& team, int fid)
    {
        if (team.empty())
            return true;
        if (team.size() == 1)
            return sat1(team[0], fid);
        const FNode& n = fnodes[static_cast<std::size_t>(fid)];
        if (n.co) {
            for (int m : team)
                if (!sat1(m, fid))
                    return false;
            return true;
        }
        std::vector<int> key;
        key.reserve(team.size() + 1);
        key.push_back(fid);
        key.insert(key.end(), team.begin(), team.end());
        if (auto it = team_memo.find(key); it != team_memo.end())
            return it->second;
        bool r = false;
        switch (n.kind) {
        case Kind::Dep: r = dep_holds(team, n); break;
        case Kind::And: r = sat(team, n.a) && sat(team, n.b); break;
        case Kind::Global: r = sat(team, n.a) || sat(team, n.b); break;
        case Kind::Cf: r = n.spec < 0 || sat(image(team, n.spec), n.a); break;
        case Kind::Tensor: r = sat_tensor(team, fid); break;
        default: throw Error("non-CO node classified as CO");
        }
        team_memo.emplace(std::move(key), r);
        return r;
    }

    bool sat_tensor(const std::vector<int>& team, int fid)
    {
        const FNode& n = fnodes[static_cast<std::size_t>(fid)];
        const FNode& fa = fnodes[static_cast<std::size_t>(n.a)];
        const FNode& fb = fnodes[static_cast<std::size_t>(n.b)];
        // A flat side takes every member it can; the rest must satisfy the other side.
        if (fa.co || fb.co) {
            const int flat = fa.co ? n.a : n.b;
            const int other = fa.co ? n.b : n.a;
            std::vector<int> rest;
            for (int m : team)
                if (!sat1(m, flat))
                    rest.push_back(m);
            return sat(rest, other);
        }
        if (team.size() <= limits.family_cap) {
            const auto fam = family(team, fid);
            return fam->contains((std::uint64_t{1} << team.size()) - 1);
        }
        std::vector<int> left, right, free;
        for (int m : team) {
            const bool ia = sat1(m, n.a);
            const bool ib = sat1(m, n.b);
            if (!ia && !ib)
                return false;
            if (!ia)
                right.push_back(m);
            else if (!ib)
                left.push_back(m);
            else
                free.push_back(m);
        }
        if (free.size() > limits.team_cap)
            throw BudgetExceeded("tensor split over " + std::to_string(free.size()) +
                                 " undetermined members exceeds the team cap");
        for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << free.size()); ++sub) {
            std::vector<int> l = left, r = right;
            for (std::size_t i = 0; i < free.size(); ++i)
                ((sub >> i) & 1u ? l : r).push_back(free[i]);
            std::sort(l.begin(), l.end());
            std::sort(r.begin(), r.end());
            if (sat(l, n.a) && sat(r, n.b))
                return true;
        }
        return false;
    }

    // Universe positions may repeat ids; subsets are read as sets of ids.
    Family family(const std::vector<int>& uni, int fid)
    {
        const std::size_t n = uni.size();
        if (n > limits.family_cap)
            throw BudgetExceeded("subteam family over " + std::to_string(n) + " members exceeds the family cap");
        std::vector<int> key;
        key.reserve(n + 1);
        key.push_back(fid);
        key.insert(key.end(), uni.begin(), uni.end());
        if (auto it = family_memo.find(key); it != family_memo.end())
            return it->second;

        const FNode node = fnodes[static_cast<std::size_t>(fid)];
        const std::uint64_t full = std::uint64_t{1} << n;
        auto out = std::make_shared<SubteamFamily>(n);
        auto single_mask = [&](int g) {
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (sat1(uni[i], g))
                    mask |= std::uint64_t{1} << i;
            return mask;
        };
        auto down_set = [&](std::uint64_t allowed) {
            for (std::uint64_t s = 0; s < full; ++s)
                if ((s & ~allowed) == 0)
                    out->set(s);
        };

        if (node.co) {
            down_set(single_mask(fid));
        } else {
            switch (node.kind) {
            case Kind::And:
                *out = *family(uni, node.a);
                *out &= *family(uni, node.b);
                break;
            case Kind::Global:
                *out = *family(uni, node.a);
                *out |= *family(uni, node.b);
                break;
            case Kind::Dep: {
                std::vector<std::uint64_t> clash(n, 0);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        if (conflict(uni[i], uni[j], node))
                            clash[i] |= std::uint64_t{1} << j;
                std::vector<bool> ok(full, false);
                ok[0] = true;
                out->set(0);
                for (std::uint64_t s = 1; s < full; ++s) {
                    const int low = std::countr_zero(s);
                    ok[s] = ok[s & (s - 1)] && (clash[static_cast<std::size_t>(low)] & s) == 0;
                    if (ok[s])
                        out->set(s);
                }
                break;
            }
            case Kind::Cf: {
                if (node.spec < 0) {
                    down_set(full - 1);
                    break;
                }
                std::vector<int> img(n);
                for (std::size_t i = 0; i < n; ++i)
                    img[i] = intervened(uni[i], node.spec);
                std::vector<int> iu = img;
                std::sort(iu.begin(), iu.end());
                iu.erase(std::unique(iu.begin(), iu.end()), iu.end());
                std::vector<std::uint32_t> pos(n);
                for (std::size_t i = 0; i < n; ++i)
                    pos[i] = static_cast<std::uint32_t>(std::lower_bound(iu.begin(), iu.end(), img[i]) - iu.begin());
                const auto body = family(iu, node.a);
                std::vector<std::uint32_t> im(full, 0);
                out->set(0);
                for (std::uint64_t s = 1; s < full; ++s) {
                    const int low = std::countr_zero(s);
                    im[s] = im[s & (s - 1)] | (std::uint32_t{1} << pos[static_cast<std::size_t>(low)]);
                    if (body->contains(im[s]))
                        out->set(s);
                }
                break;
            }
            case Kind::Tensor: {
                const FNode& fa = fnodes[static_cast<std::size_t>(node.a)];
                const FNode& fb = fnodes[static_cast<std::size_t>(node.b)];
                if (fa.co || fb.co) {
                    const std::uint64_t flat = single_mask(fa.co ? node.a : node.b);
                    const auto other = family(uni, fa.co ? node.b : node.a);
                    for (std::uint64_t s = 0; s < full; ++s)
                        if (other->contains(s & ~flat))
                            out->set(s);
                    break;
                }
                const auto famA = family(uni, node.a);
                const auto famB = family(uni, node.b);
                std::uint64_t sa = 0, sb = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (famA->contains(std::uint64_t{1} << i))
                        sa |= std::uint64_t{1} << i;
                    if (famB->contains(std::uint64_t{1} << i))
                        sb |= std::uint64_t{1} << i;
                }
                for (std::uint64_t s = 0; s < full; ++s) {
                    if (s & ~sa & ~sb)
                        continue;
                    const std::uint64_t left = s & ~sb;
                    const std::uint64_t right = s & ~sa;
                    const std::uint64_t free = s & sa & sb;
                    std::uint64_t sub = free;
                    while (true) {
                        if (famA->contains(left | sub) && famB->contains(right | (free & ~sub))) {
                            out->set(s);
                            break;
                        }
                        if (sub == 0)
                            break;
                        sub = (sub - 1) & free;
                    }
                }
                break;
            }
            default: throw Error("unexpected formula node in family evaluation");
            }
        }
        Family res = out;
        family_memo.emplace(std::move(key), res);
        return res;
    }

    std::vector<int> intern_universe(const std::vector<Member>& uni)
    {
        std::vector<int> ids;
        ids.reserve(uni.size());
        for (const auto& m : uni) {
            bind(m.law->signature());
            ids.push_back(intern_member(m));
        }
        return ids;
    }
};

SatContext::SatContext(Limits limits, bool allow_mixed) : impl_(std::make_unique<Impl>(limits, allow_mixed)) {}
SatContext::~SatContext() = default;

const Limits& SatContext::limits() const { return impl_->limits; }
bool SatContext::allow_mixed() const { return impl_->allow_mixed; }

bool SatContext::satisfies(const GeneralizedCausalTeam& t, const Formula& f)
{
    std::lock_guard lock(impl_->mu);
    auto ids = impl_->intern_team(t);
    const int fid = impl_->prepare(f);
    return impl_->sat(ids, fid);
}

bool SatContext::satisfies(const CausalTeam& t, const Formula& f)
{
    return satisfies(to_generalized(t), f);
}

std::vector<bool> SatContext::singletons(const std::vector<Member>& universe, const Formula& f)
{
    std::lock_guard lock(impl_->mu);
    auto ids = impl_->intern_universe(universe);
    const int fid = impl_->prepare(f);
    std::vector<bool> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        out[i] = impl_->sat1(ids[i], fid);
    return out;
}

SubteamFamily SatContext::satisfying_subteams(const std::vector<Member>& universe, const Formula& f)
{
    std::lock_guard lock(impl_->mu);
    auto ids = impl_->intern_universe(universe);
    const int fid = impl_->prepare(f);
    return *impl_->family(ids, fid);
}

const std::vector<Member>& SatContext::universe(const SignaturePtr& sig)
{
    std::lock_guard lock(impl_->mu);
    impl_->bind(sig);
    if (impl_->universe.empty())
        impl_->universe = enumerate_sem_reduced(sig, impl_->limits.nodes);
    return impl_->universe;
}

const std::vector<SatContext::CausalClass>& SatContext::causal_classes(const SignaturePtr& sig)
{
    const auto& uni = universe(sig);
    std::lock_guard lock(impl_->mu);
    if (!impl_->classes_ready) {
        for (const auto& m : uni) {
            if (impl_->classes.empty() || impl_->classes.back().law != m.law)
                impl_->classes.push_back(CausalClass{m.law, {}});
            impl_->classes.back().members.push_back(m);
        }
        impl_->classes_ready = true;
    }
    return impl_->classes;
}

bool satisfies(const GeneralizedCausalTeam& t, const Formula& f)
{
    SatContext ctx;
    return ctx.satisfies(t, f);
}

bool satisfies(const CausalTeam& t, const Formula& f)
{
    SatContext ctx;
    return ctx.satisfies(t, f);
}

namespace {

bool flat_family(const SubteamFamily& fam)
{
    const std::size_t n = fam.universe_size();
    std::uint64_t single = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (fam.contains(std::uint64_t{1} << i))
            single |= std::uint64_t{1} << i;
    for (std::uint64_t s = 0; s < fam.subset_count(); ++s)
        if (fam.contains(s) != ((s & ~single) == 0))
            return false;
    return true;
}

std::vector<std::uint64_t> subsets_up_to(std::size_t n, std::size_t k)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
        if (static_cast<std::size_t>(std::popcount(s)) <= k)
            out.push_back(s);
    return out;
}

// Calls fn on each subset of {0..n-1} with at most k elements until it returns true.
template <class Fn>
bool for_small_subsets(std::size_t n, std::size_t k, std::size_t budget, Fn&& fn)
{
    std::size_t visited = 0;
    std::vector<std::size_t> pick;
    std::function<bool(std::size_t)> rec = [&](std::size_t start) {
        if (++visited > budget)
            throw BudgetExceeded("bounded team enumeration exceeds the node budget");
        if (fn(pick))
            return true;
        if (pick.size() == k)
            return false;
        for (std::size_t i = start; i < n; ++i) {
            pick.push_back(i);
            if (rec(i + 1))
                return true;
            pick.pop_back();
        }
        return false;
    };
    return rec(0);
}

std::optional<GeneralizedCausalTeam> search(const std::vector<Formula>& gamma, const Formula& psi,
                                            const SignaturePtr& sig, const std::vector<Member>& uni,
                                            std::size_t max_rows, SatContext& ctx)
{
    const std::size_t n = uni.size();
    if (n <= ctx.limits().family_cap) {
        SubteamFamily good(n);
        for (std::uint64_t s = 0; s < good.subset_count(); ++s)
            good.set(s);
        for (const auto& g : gamma)
            good &= ctx.satisfying_subteams(uni, g);
        const auto target = ctx.satisfying_subteams(uni, psi);
        for (std::uint64_t s : subsets_up_to(n, max_rows)) {
            if (good.contains(s) && !target.contains(s)) {
                std::vector<Member> ms;
                for (std::size_t i = 0; i < n; ++i)
                    if ((s >> i) & 1u)
                        ms.push_back(uni[i]);
                return GeneralizedCausalTeam(sig, std::move(ms));
            }
        }
        return std::nullopt;
    }
    std::optional<GeneralizedCausalTeam> found;
    for_small_subsets(n, max_rows, ctx.limits().nodes, [&](const std::vector<std::size_t>& pick) {
        std::vector<Member> ms;
        for (auto i : pick)
            ms.push_back(uni[i]);
        GeneralizedCausalTeam t(sig, std::move(ms));
        for (const auto& g : gamma)
            if (!ctx.satisfies(t, g))
                return false;
        if (ctx.satisfies(t, psi))
            return false;
        found = std::move(t);
        return true;
    });
    return found;
}

}  // namespace

bool is_flat(const Formula& f, const SignaturePtr& sig, SatContext& ctx)
{
    const auto& uni = ctx.universe(sig);
    if (uni.size() > ctx.limits().family_cap) {
        // Too many for one family: check each ∼-class universe and mixed pairs.
        throw BudgetExceeded("exhaustive flatness check needs |Sem_σ/≈| <= family cap");
    }
    return flat_family(ctx.satisfying_subteams(uni, f));
}

bool is_flat(const Formula& f, const std::vector<GeneralizedCausalTeam>& scope, SatContext& ctx)
{
    for (const auto& t : scope) {
        bool all = true;
        for (const auto& m : t.members())
            if (!ctx.satisfies(GeneralizedCausalTeam(t.signature(), {m}), f)) {
                all = false;
                break;
            }
        if (ctx.satisfies(t, f) != all)
            return false;
    }
    return true;
}

std::optional<GeneralizedCausalTeam> bounded_counterexample(const std::vector<Formula>& gamma,
                                                            const Formula& psi, const SignaturePtr& sig,
                                                            std::size_t max_rows, Semantics sem,
                                                            SatContext& ctx)
{
    if (sem == Semantics::generalized)
        return search(gamma, psi, sig, ctx.universe(sig), max_rows, ctx);
    for (const auto& cls : ctx.causal_classes(sig))
        if (auto t = search(gamma, psi, sig, cls.members, max_rows, ctx))
            return t;
    return std::nullopt;
}

bool entails_bounded(const std::vector<Formula>& gamma, const Formula& psi, const SignaturePtr& sig,
                     std::size_t max_rows, Semantics sem, SatContext& ctx)
{
    return !bounded_counterexample(gamma, psi, sig, max_rows, sem, ctx).has_value();
}

}  // namespace ctlab
