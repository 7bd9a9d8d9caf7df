#include "sadic/iet.hpp"

#include <numeric>
#include <sstream>

namespace sadic {

bool is_irreducible(const std::vector<int>& images) {
    const int m = static_cast<int>(images.size());
    std::vector<bool> seen(m + 1, false);
    int max_seen = 0;
    for (int k = 1; k < m; ++k) {
        int v = images[k - 1];
        if (v < 1 || v > m || seen[v]) return false;
        seen[v] = true;
        max_seen = std::max(max_seen, v);
        if (max_seen == k) return false; // pi({1..k}) == {1..k}
    }
    int last = images[m - 1];
    return last >= 1 && last <= m && !seen[last];
}

IETPermutation::IETPermutation(std::vector<int> images) : images_(std::move(images)) {
    const int m = static_cast<int>(images_.size());
    if (m < 2) throw std::invalid_argument("IETPermutation: need at least 2 intervals");
    if (!is_irreducible(images_)) throw std::invalid_argument("IETPermutation: permutation is reducible or invalid");
    inverse_.assign(m, 0);
    for (int i = 1; i <= m; ++i) inverse_[images_[i - 1] - 1] = i;
}

std::string IETPermutation::to_string() const {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < size(); ++i) os << (i ? "," : "") << images_[i];
    os << ")";
    return os.str();
}

IETPermutation rauzy_apply(const IETPermutation& pi, RauzyType type) {
    const int m = pi.size();
    std::vector<int> out(m, 0);
    if (type == RauzyType::A) {
        const int pm = pi.map(m);
        for (int j = 1; j <= m; ++j) {
            int v = pi.map(j);
            if (v <= pm) out[j - 1] = v;
            else if (v < m) out[j - 1] = v + 1;
            else out[j - 1] = pm + 1;
        }
    } else {
        const int alpha = pi.preimage(m);
        for (int j = 1; j <= m; ++j) {
            if (j <= alpha) out[j - 1] = pi.map(j);
            else if (j == alpha + 1) out[j - 1] = pi.map(m);
            else out[j - 1] = pi.map(j - 1);
        }
    }
    return IETPermutation(std::move(out));
}

Substitution rauzy_substitution(const IETPermutation& pi, RauzyType type) {
    const int m = pi.size();
    const int alpha = pi.preimage(m);
    Alphabet alphabet(m);
    std::vector<Word> images(m);
    if (type == RauzyType::A) {
        for (int j = 1; j <= m; ++j) {
            if (j == alpha) images[j - 1] = {static_cast<Letter>(alpha - 1), static_cast<Letter>(m - 1)};
            else images[j - 1] = {static_cast<Letter>(j - 1)};
        }
    } else {
        for (int j = 1; j <= m; ++j) {
            if (j <= alpha) images[j - 1] = {static_cast<Letter>(j - 1)};
            else if (j == alpha + 1) images[j - 1] = {static_cast<Letter>(alpha - 1), static_cast<Letter>(m - 1)};
            else images[j - 1] = {static_cast<Letter>(j - 2)};
        }
    }
    return Substitution(alphabet, std::move(images));
}

} // namespace sadic
