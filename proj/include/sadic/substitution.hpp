// Substitutions on a finite alphabet, their incidence matrices, composition,
// and return-word combinatorics.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "sadic/int_matrix.hpp"
#include "sadic/words.hpp"

namespace sadic {

// A map letter -> nonempty word.  By default construction enforces the
// working class: all letters appear among the images and at least one image
// has length > 1.  Auxiliary substitutions (letter permutations and the
// like) can be made with `unchecked`.
class Substitution {
public:
    Substitution(Alphabet alphabet, std::vector<Word> images);
    static Substitution unchecked(Alphabet alphabet, std::vector<Word> images);
    static Substitution parse(const std::string& spec); // "12,1" or "1->12;2->1"

    const Alphabet& alphabet() const { return alphabet_; }
    int alphabet_size() const { return alphabet_.size(); }
    const Word& image(Letter a) const { return images_.at(a); }
    const std::vector<Word>& images() const { return images_; }

    // Incidence matrix: entry (i,j) counts letter i in the image of j.
    const IntMatrix& matrix() const { return matrix_; }

    Word apply(const Word& word) const;
    Word apply_letter(Letter a) const { return image(a); }

    bool operator==(const Substitution& rhs) const {
        return alphabet_ == rhs.alphabet_ && images_ == rhs.images_;
    }

    std::string to_string() const;

private:
    Substitution(Alphabet alphabet, std::vector<Word> images, bool checked);

    Alphabet alphabet_;
    std::vector<Word> images_;
    IntMatrix matrix_;
};

IntMatrix substitution_matrix(const Substitution& s);

// Word-sense composition: compose(f, g) maps a -> f(g(a)); the matrix of the
// result is matrix(f) * matrix(g), exactly.
Substitution compose(const Substitution& outer, const Substitution& inner);

// All words v with |v| <= max_len whose first letter c makes vc occur inside
// every image of `s`.  This is the per-image criterion that the good-word
// construction produces; it implies the return-word property on the shift.
std::set<Word> good_return_words(const Substitution& s, int max_len);

} // namespace sadic
