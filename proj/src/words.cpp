#include "sadic/words.hpp"

#include <algorithm>

namespace sadic {

char letter_to_char(Letter a) {
    if (a < 9) return static_cast<char>('1' + a);
    return static_cast<char>('a' + (a - 9));
}

Letter char_to_letter(char c) {
    if (c >= '1' && c <= '9') return static_cast<Letter>(c - '1');
    if (c >= 'a' && c <= 'z') return static_cast<Letter>(9 + (c - 'a'));
    throw std::invalid_argument(std::string("invalid letter character: '") + c + "'");
}

Word parse_word(const std::string& text, const Alphabet& alphabet) {
    Word word;
    word.reserve(text.size());
    for (char c : text) {
        Letter a = char_to_letter(c);
        if (a >= alphabet.size())
            throw std::invalid_argument("letter '" + std::string(1, c) + "' outside alphabet of size " +
                                        std::to_string(alphabet.size()));
        word.push_back(a);
    }
    return word;
}

std::string format_word(const Word& word) {
    std::string out;
    out.reserve(word.size());
    for (Letter a : word) out.push_back(letter_to_char(a));
    return out;
}

PopulationVector population_vector(const Word& word, const Alphabet& alphabet) {
    PopulationVector counts(alphabet.size(), 0);
    for (Letter a : word) {
        if (a >= alphabet.size()) throw std::invalid_argument("population_vector: letter outside alphabet");
        counts[a] += 1;
    }
    return counts;
}

double tiling_length(const Word& word, const std::vector<double>& roof) {
    for (double s : roof)
        if (!(s > 0.0)) throw std::invalid_argument("tiling_length: roof entries must be positive");
    double total = 0.0;
    for (Letter a : word) {
        if (a >= roof.size()) throw std::invalid_argument("tiling_length: letter outside roof vector");
        total += roof[a];
    }
    return total;
}

namespace {

template <typename Seq>
bool simple_impl(const Seq& q) {
    const std::size_t k = q.size();
    if (k == 0) throw std::invalid_argument("is_simple_word: empty word");
    // Suffix q_i..q_k vs prefix q_1..q_{k-i+1}, for i = 2..k (1-based).
    for (std::size_t i = 1; i < k; ++i) {
        if (std::equal(q.begin() + i, q.end(), q.begin())) return false;
    }
    return true;
}

} // namespace

bool is_simple_word(const std::string& labels) { return simple_impl(labels); }
bool is_simple_word(const Word& labels) { return simple_impl(labels); }

} // namespace sadic
