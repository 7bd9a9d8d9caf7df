// Alphabets, words over {1..m}, population vectors and simple-word tests.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sadic {

// Letters are stored 0-based; letter k prints as '1'+k for k<9, then 'a'+k-9.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

// Integer count vector; exact (entries can outgrow 64 bits once words come
// from deep tower expansions, where we count via matrices instead).
using PopulationVector = std::vector<mpz_class>;

class Alphabet {
public:
    explicit Alphabet(int size) : size_(size) {
        if (size < 2) throw std::invalid_argument("Alphabet: need at least 2 letters");
        if (size > 35) throw std::invalid_argument("Alphabet: at most 35 letters supported");
    }
    int size() const { return size_; }
    bool operator==(const Alphabet&) const = default;

private:
    int size_;
};

char letter_to_char(Letter a);
Letter char_to_letter(char c);

// "121" -> {0,1,0}; throws on characters outside the alphabet.
Word parse_word(const std::string& text, const Alphabet& alphabet);
std::string format_word(const Word& word);

PopulationVector population_vector(const Word& word, const Alphabet& alphabet);

// <l(word), s>: total flow time of the tile sequence spelled by `word`.
double tiling_length(const Word& word, const std::vector<double>& roof);

// True iff no proper suffix of `labels` equals a prefix of the same length,
// so two occurrences of the word can never overlap.
bool is_simple_word(const std::string& labels);
bool is_simple_word(const Word& labels);

} // namespace sadic
