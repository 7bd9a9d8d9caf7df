// Sequences of substitutions indexed by n (one- or two-sided): the symbolic
// environment every cocycle and flow in this library is driven by.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sadic/substitution.hpp"

namespace sadic {

// Immutable after construction; random access at(n) is deterministic, so
// the same sequence object can be shared across threads.
class SubstitutionSequence {
public:
    enum class Mode { Periodic, Explicit, IID };

    static SubstitutionSequence periodic(std::vector<Substitution> block, std::string name = "periodic");
    static SubstitutionSequence explicit_list(std::vector<Substitution> list, std::string name = "explicit");
    // Independent uniform draws from `pool`, reproducible from `seed`,
    // defined for every n in Z.
    static SubstitutionSequence iid(std::vector<Substitution> pool, std::uint64_t seed, std::string name = "iid");

    // Induced form a_n = q p_n q: every block is wrapped on both sides by
    // the fixed word's substitution.
    static SubstitutionSequence induced(const Substitution& q_block, const SubstitutionSequence& inner);

    const Substitution& at(long n) const;
    bool two_sided() const { return mode_ != Mode::Explicit; }
    long explicit_length() const { return mode_ == Mode::Explicit ? static_cast<long>(store_.size()) : -1; }
    int alphabet_size() const { return store_.front().alphabet_size(); }
    const Alphabet& alphabet() const { return store_.front().alphabet(); }
    Mode mode() const { return mode_; }
    bool unimodular() const { return unimodular_; }
    bool induced_form() const { return induced_; }
    const std::string& name() const { return name_; }

    // Same sequence read from position `offset`: shifted(k).at(n) == at(n+k).
    SubstitutionSequence shifted(long offset) const;

private:
    SubstitutionSequence(Mode mode, std::vector<Substitution> store, std::uint64_t seed, std::string name);

    std::size_t slot(long n) const;

    Mode mode_;
    std::vector<Substitution> store_;
    std::uint64_t seed_ = 0;
    long offset_ = 0;
    bool unimodular_ = false;
    bool induced_ = false;
    std::string name_;
};

// Named example sequences used by the CLI ("fib", "tribonacci", ...).
SubstitutionSequence preset_sequence(const std::string& spec, std::uint64_t seed);

} // namespace sadic
