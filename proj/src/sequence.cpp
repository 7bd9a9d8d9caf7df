#include "sadic/sequence.hpp"

#include <sstream>

namespace sadic {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t zigzag(long n) {
    return n >= 1 ? 2ULL * static_cast<std::uint64_t>(n - 1)
                  : 2ULL * static_cast<std::uint64_t>(-n) + 1ULL;
}

} // namespace

SubstitutionSequence::SubstitutionSequence(Mode mode, std::vector<Substitution> store, std::uint64_t seed,
                                           std::string name)
    : mode_(mode), store_(std::move(store)), seed_(seed), name_(std::move(name)) {
    if (store_.empty()) throw std::invalid_argument("SubstitutionSequence: no substitutions");
    for (const Substitution& s : store_) {
        if (s.alphabet_size() != store_.front().alphabet_size())
            throw std::invalid_argument("SubstitutionSequence: mixed alphabets");
        if (s.matrix().determinant() == 0)
            throw std::invalid_argument("SubstitutionSequence: singular substitution matrix");
    }
    unimodular_ = true;
    for (const Substitution& s : store_)
        if (!s.matrix().is_unimodular()) { unimodular_ = false; break; }
}

SubstitutionSequence SubstitutionSequence::periodic(std::vector<Substitution> block, std::string name) {
    return SubstitutionSequence(Mode::Periodic, std::move(block), 0, std::move(name));
}

SubstitutionSequence SubstitutionSequence::explicit_list(std::vector<Substitution> list, std::string name) {
    return SubstitutionSequence(Mode::Explicit, std::move(list), 0, std::move(name));
}

SubstitutionSequence SubstitutionSequence::iid(std::vector<Substitution> pool, std::uint64_t seed,
                                               std::string name) {
    return SubstitutionSequence(Mode::IID, std::move(pool), seed, std::move(name));
}

SubstitutionSequence SubstitutionSequence::induced(const Substitution& q_block,
                                                   const SubstitutionSequence& inner) {
    std::vector<Substitution> wrapped;
    wrapped.reserve(inner.store_.size());
    for (const Substitution& p : inner.store_)
        wrapped.push_back(compose(compose(q_block, p), q_block));
    SubstitutionSequence out(inner.mode_, std::move(wrapped), inner.seed_, inner.name_ + "+induced");
    out.offset_ = inner.offset_;
    out.induced_ = true;
    return out;
}

std::size_t SubstitutionSequence::slot(long n) const {
    n += offset_;
    const long k = static_cast<long>(store_.size());
    switch (mode_) {
        case Mode::Periodic: {
            long r = (n - 1) % k;
            if (r < 0) r += k;
            return static_cast<std::size_t>(r);
        }
        case Mode::Explicit: {
            if (n < 1 || n > k)
                throw std::out_of_range("SubstitutionSequence: index " + std::to_string(n) +
                                        " outside explicit list of length " + std::to_string(k));
            return static_cast<std::size_t>(n - 1);
        }
        case Mode::IID:
            return static_cast<std::size_t>(splitmix64(seed_ ^ splitmix64(zigzag(n))) % store_.size());
    }
    throw std::logic_error("SubstitutionSequence: bad mode");
}

const Substitution& SubstitutionSequence::at(long n) const { return store_[slot(n)]; }

SubstitutionSequence SubstitutionSequence::shifted(long offset) const {
    SubstitutionSequence out = *this;
    out.offset_ += offset;
    return out;
}

SubstitutionSequence preset_sequence(const std::string& spec, std::uint64_t seed) {
    if (spec == "fib" || spec == "fibonacci")
        return SubstitutionSequence::periodic({Substitution::parse("12,1")}, "fib");
    if (spec == "tribonacci")
        return SubstitutionSequence::periodic({Substitution::parse("12,13,1")}, "tribonacci");
    if (spec == "fib3")
        return SubstitutionSequence::periodic({Substitution::parse("12112,121")}, "fib3");
    if (spec == "iid2") {
        // Two positive 2x2 blocks drawn independently.
        return SubstitutionSequence::iid({Substitution::parse("12,1"), Substitution::parse("121,12")}, seed,
                                         "iid2");
    }
    if (spec.rfind("periodic:", 0) == 0) {
        std::vector<Substitution> block;
        std::stringstream ss(spec.substr(9));
        std::string item;
        while (std::getline(ss, item, '|')) block.push_back(Substitution::parse(item));
        return SubstitutionSequence::periodic(std::move(block), "periodic");
    }
    if (spec.rfind("iid:", 0) == 0) {
        std::vector<Substitution> pool;
        std::stringstream ss(spec.substr(4));
        std::string item;
        while (std::getline(ss, item, '|')) pool.push_back(Substitution::parse(item));
        return SubstitutionSequence::iid(std::move(pool), seed, "iid");
    }
    throw std::invalid_argument("unknown sequence spec: " + spec);
}

} // namespace sadic
