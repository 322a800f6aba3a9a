#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ctlab/formula.hpp"
#include "ctlab/limits.hpp"
#include "ctlab/team.hpp"

namespace ctlab {

enum class Semantics { causal, generalized };

const char* semantics_name(Semantics s);

// The subteams of a fixed universe (bit i of a mask = the i-th member) that
// satisfy some formula.
class SubteamFamily {
public:
    SubteamFamily() = default;
    explicit SubteamFamily(std::size_t universe_size);

    std::size_t universe_size() const { return n_; }
    std::uint64_t subset_count() const { return std::uint64_t{1} << n_; }
    bool contains(std::uint64_t mask) const { return (bits_[mask >> 6] >> (mask & 63)) & 1u; }
    void set(std::uint64_t mask) { bits_[mask >> 6] |= std::uint64_t{1} << (mask & 63); }
    std::uint64_t count() const;

    SubteamFamily& operator&=(const SubteamFamily& o);
    SubteamFamily& operator|=(const SubteamFamily& o);
    bool operator==(const SubteamFamily& o) const { return n_ == o.n_ && bits_ == o.bits_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Evaluation state: interned laws (one per ∼-class), members, interventions
// and formulas, with memo tables. Members are identified up to ≈, which is
// sound by invariance under causal equivalence. Calls on one context are
// serialized internally; use one context per worker for parallel sweeps.
class SatContext {
public:
    explicit SatContext(Limits limits = Limits::defaults(), bool allow_mixed = false);
    ~SatContext();
    SatContext(const SatContext&) = delete;
    SatContext& operator=(const SatContext&) = delete;

    const Limits& limits() const;
    bool allow_mixed() const;

    bool satisfies(const GeneralizedCausalTeam& t, const Formula& f);
    // Via T^g; equal to the causal clauses.
    bool satisfies(const CausalTeam& t, const Formula& f);

    // One flag per universe member: does the singleton satisfy f.
    std::vector<bool> singletons(const std::vector<Member>& universe, const Formula& f);

    // All satisfying subteams; the universe must not exceed limits().family_cap.
    SubteamFamily satisfying_subteams(const std::vector<Member>& universe, const Formula& f);

    // Sem_σ/≈ for the context's signature, cached.
    const std::vector<Member>& universe(const SignaturePtr& sig);

    // Per ∼-class representative, its compatible rows (the causal teams of that
    // class are exactly the subsets).
    struct CausalClass {
        LawPtr law;
        std::vector<Member> members;
    };
    const std::vector<CausalClass>& causal_classes(const SignaturePtr& sig);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool satisfies(const GeneralizedCausalTeam& t, const Formula& f);
bool satisfies(const CausalTeam& t, const Formula& f);

// Flatness over every team of Sem_σ/≈.
bool is_flat(const Formula& f, const SignaturePtr& sig, SatContext& ctx);
// Flatness over the given teams only.
bool is_flat(const Formula& f, const std::vector<GeneralizedCausalTeam>& scope, SatContext& ctx);

// A team with at most max_rows members satisfying Γ but not ψ, if any.
std::optional<GeneralizedCausalTeam> bounded_counterexample(const std::vector<Formula>& gamma,
                                                            const Formula& psi, const SignaturePtr& sig,
                                                            std::size_t max_rows, Semantics sem,
                                                            SatContext& ctx);

bool entails_bounded(const std::vector<Formula>& gamma, const Formula& psi, const SignaturePtr& sig,
                     std::size_t max_rows, Semantics sem, SatContext& ctx);

}  // namespace ctlab
