#include "sadic/substitution.hpp"

#include <algorithm>
#include <sstream>

namespace sadic {

namespace {

IntMatrix build_matrix(const Alphabet& alphabet, const std::vector<Word>& images) {
    const int m = alphabet.size();
    IntMatrix mat(m, m);
    for (int j = 0; j < m; ++j)
        for (Letter i : images[j]) mat.at(i, j) += 1;
    return mat;
}

} // namespace

Substitution::Substitution(Alphabet alphabet, std::vector<Word> images)
    : Substitution(std::move(alphabet), std::move(images), true) {}

Substitution Substitution::unchecked(Alphabet alphabet, std::vector<Word> images) {
    return Substitution(std::move(alphabet), std::move(images), false);
}

Substitution::Substitution(Alphabet alphabet, std::vector<Word> images, bool checked)
    : alphabet_(alphabet), images_(std::move(images)) {
    const int m = alphabet_.size();
    if (static_cast<int>(images_.size()) != m)
        throw std::invalid_argument("Substitution: need exactly one image per letter");
    std::vector<bool> appears(m, false);
    bool has_long_image = false;
    for (const Word& w : images_) {
        if (w.empty()) throw std::invalid_argument("Substitution: empty image");
        if (w.size() > 1) has_long_image = true;
        for (Letter a : w) {
            if (a >= m) throw std::invalid_argument("Substitution: image letter outside alphabet");
            appears[a] = true;
        }
    }
    if (checked) {
        if (!has_long_image)
            throw std::invalid_argument("Substitution: no image of length > 1");
        if (!std::all_of(appears.begin(), appears.end(), [](bool b) { return b; }))
            throw std::invalid_argument("Substitution: some letter never appears in the images");
    }
    matrix_ = build_matrix(alphabet_, images_);
}

Substitution Substitution::parse(const std::string& spec) {
    // Accepts "12,1" (comma-separated images, letter k on position k) or the
    // explicit "1->12;2->1" form.
    std::vector<std::string> parts;
    if (spec.find("->") != std::string::npos) {
        std::stringstream ss(spec);
        std::string item;
        std::vector<std::pair<char, std::string>> mapped;
        while (std::getline(ss, item, ';')) {
            auto pos = item.find("->");
            if (pos == std::string::npos || pos == 0) throw std::invalid_argument("Substitution::parse: bad rule " + item);
            std::string lhs = item.substr(0, pos);
            lhs.erase(std::remove(lhs.begin(), lhs.end(), ' '), lhs.end());
            std::string rhs = item.substr(pos + 2);
            rhs.erase(std::remove(rhs.begin(), rhs.end(), ' '), rhs.end());
            if (lhs.size() != 1) throw std::invalid_argument("Substitution::parse: left side must be one letter");
            mapped.emplace_back(lhs[0], rhs);
        }
        parts.resize(mapped.size());
        for (auto& [c, rhs] : mapped) {
            int idx = char_to_letter(c);
            if (idx >= static_cast<int>(parts.size())) throw std::invalid_argument("Substitution::parse: letter out of range");
            parts[idx] = rhs;
        }
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(item);
    }
    if (parts.size() < 2) throw std::invalid_argument("Substitution::parse: need at least 2 images");
    Alphabet alphabet(static_cast<int>(parts.size()));
    std::vector<Word> images;
    for (const auto& p : parts) images.push_back(parse_word(p, alphabet));
    return Substitution(alphabet, std::move(images));
}

Word Substitution::apply(const Word& word) const {
    Word out;
    std::size_t total = 0;
    for (Letter a : word) total += image(a).size();
    out.reserve(total);
    for (Letter a : word) {
        const Word& img = image(a);
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

std::string Substitution::to_string() const {
    std::ostringstream os;
    for (int a = 0; a < alphabet_size(); ++a) {
        if (a) os << ";";
        os << letter_to_char(static_cast<Letter>(a)) << "->" << format_word(images_[a]);
    }
    return os.str();
}

IntMatrix substitution_matrix(const Substitution& s) { return s.matrix(); }

Substitution compose(const Substitution& outer, const Substitution& inner) {
    if (!(outer.alphabet() == inner.alphabet()))
        throw std::invalid_argument("compose: alphabet mismatch");
    std::vector<Word> images;
    images.reserve(inner.alphabet_size());
    for (int a = 0; a < inner.alphabet_size(); ++a)
        images.push_back(outer.apply(inner.image(static_cast<Letter>(a))));
    return Substitution::unchecked(outer.alphabet(), std::move(images));
}

std::set<Word> good_return_words(const Substitution& s, int max_len) {
    if (max_len < 1) throw std::invalid_argument("good_return_words: max_len must be >= 1");
    const int m = s.alphabet_size();
    // Candidates vc are factors of every image that start and end with the
    // same letter; enumerate factors of the shortest image first.
    int shortest = 0;
    for (int a = 1; a < m; ++a)
        if (s.image(static_cast<Letter>(a)).size() < s.image(static_cast<Letter>(shortest)).size()) shortest = a;
    const Word& base = s.image(static_cast<Letter>(shortest));

    auto contains = [](const Word& hay, const Word& needle) {
        return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
    };

    std::set<Word> found;
    for (std::size_t start = 0; start < base.size(); ++start) {
        for (std::size_t len = 2; len <= static_cast<std::size_t>(max_len) + 1 && start + len <= base.size(); ++len) {
            Word vc(base.begin() + start, base.begin() + start + len);
            if (vc.front() != vc.back()) continue;
            bool everywhere = true;
            for (int a = 0; a < m && everywhere; ++a)
                everywhere = contains(s.image(static_cast<Letter>(a)), vc);
            if (everywhere) found.insert(Word(vc.begin(), vc.end() - 1));
        }
    }
    return found;
}

} // namespace sadic
