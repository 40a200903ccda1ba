#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bp {

using Letter = int;
using Word = std::vector<Letter>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + what), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.size() < 2) throw std::invalid_argument("alphabet needs at least two letters");
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            for (std::size_t j = i + 1; j < symbols_.size(); ++j)
                if (symbols_[i] == symbols_[j])
                    throw std::invalid_argument("duplicate letter '" + symbols_[i] + "'");
    }
    static Alphabet ab() { return Alphabet({"a", "b"}); }

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(Letter l) const { return symbols_.at(static_cast<std::size_t>(l)); }
    const std::vector<std::string>& symbols() const { return symbols_; }

    Letter index_of(std::string_view s) const {
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            if (symbols_[i] == s) return static_cast<Letter>(i);
        throw std::invalid_argument("letter '" + std::string(s) + "' not in alphabet");
    }
    bool contains(Letter l) const { return l >= 0 && static_cast<std::size_t>(l) < symbols_.size(); }
    bool single_char() const {
        return std::all_of(symbols_.begin(), symbols_.end(), [](const auto& s) { return s.size() == 1; });
    }

    // Reads one symbol per character; only valid for single-character alphabets.
    Word word(std::string_view text) const {
        Word w;
        w.reserve(text.size());
        for (char c : text) w.push_back(index_of(std::string_view(&c, 1)));
        return w;
    }

    std::string render(const Word& w) const {
        std::string out;
        bool sep = !single_char();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (sep && i) out.push_back(' ');
            out += symbol(w[i]);
        }
        return out;
    }

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

private:
    std::vector<std::string> symbols_;
};

class Substitution {
public:
    Substitution() = default;
    Substitution(Alphabet alphabet, std::vector<Word> images)
        : alphabet_(std::move(alphabet)), images_(std::move(images)) {
        if (images_.size() != alphabet_.size()) throw std::invalid_argument("one image per letter required");
        for (const auto& im : images_) {
            if (im.empty()) throw std::invalid_argument("empty image");
            for (Letter l : im)
                if (!alphabet_.contains(l)) throw std::invalid_argument("image letter outside alphabet");
        }
    }

    // Grammar: rule (',' rule)*, rule = letter '->' letters; whitespace ignored.
    static Substitution parse(std::string_view text) {
        struct Rule {
            char lhs;
            std::string rhs;
            std::size_t pos;
        };
        std::vector<Rule> rules;
        std::size_t i = 0;
        auto skip = [&] {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        };
        auto letter = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
        for (;;) {
            skip();
            if (i >= text.size()) throw ParseError(i, "expected a letter");
            if (!letter(text[i])) throw ParseError(i, std::string("unexpected '") + text[i] + "'");
            Rule r{text[i], {}, i};
            ++i;
            skip();
            if (text.substr(i, 2) != "->") throw ParseError(i, "expected '->'");
            i += 2;
            skip();
            while (i < text.size() && text[i] != ',') {
                if (std::isspace(static_cast<unsigned char>(text[i]))) {
                    ++i;
                    continue;
                }
                if (!letter(text[i])) throw ParseError(i, std::string("unexpected '") + text[i] + "'");
                r.rhs.push_back(text[i++]);
            }
            if (r.rhs.empty()) throw ParseError(i, "empty image");
            rules.push_back(r);
            if (i >= text.size()) break;
            ++i;
        }
        std::vector<std::string> symbols;
        for (const auto& r : rules) {
            std::string s(1, r.lhs);
            if (std::find(symbols.begin(), symbols.end(), s) != symbols.end())
                throw ParseError(r.pos, "letter '" + s + "' defined twice");
            symbols.push_back(s);
        }
        if (symbols.size() < 2) throw ParseError(0, "at least two rules required");
        Alphabet alpha(symbols);
        std::vector<Word> images;
        for (const auto& r : rules) {
            Word w;
            for (char c : r.rhs) {
                std::string s(1, c);
                if (std::find(symbols.begin(), symbols.end(), s) == symbols.end())
                    throw ParseError(r.pos, "image of '" + std::string(1, r.lhs) + "' uses undefined letter '" + s + "'");
                w.push_back(alpha.index_of(s));
            }
            images.push_back(std::move(w));
        }
        return Substitution(std::move(alpha), std::move(images));
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const Word& image(Letter l) const { return images_.at(static_cast<std::size_t>(l)); }
    const std::vector<Word>& images() const { return images_; }

    bool uniform() const {
        return std::all_of(images_.begin(), images_.end(),
                           [&](const Word& w) { return w.size() == images_[0].size(); });
    }
    std::size_t length() const {
        if (!uniform()) throw std::invalid_argument("substitution is not of constant length");
        return images_[0].size();
    }
    bool positive() const {
        for (const auto& im : images_)
            for (std::size_t l = 0; l < alphabet_.size(); ++l)
                if (std::find(im.begin(), im.end(), static_cast<Letter>(l)) == im.end()) return false;
        return true;
    }
    bool all_images_equal() const {
        return std::all_of(images_.begin(), images_.end(), [&](const Word& w) { return w == images_[0]; });
    }

    Word apply(const Word& u) const {
        Word out;
        for (Letter l : u) {
            if (!alphabet_.contains(l)) throw std::invalid_argument("symbol not in alphabet");
            const Word& im = images_[static_cast<std::size_t>(l)];
            out.insert(out.end(), im.begin(), im.end());
        }
        return out;
    }

    Word iterate(const Word& u, int k) const {
        Word w = u;
        for (int j = 0; j < k; ++j) w = apply(w);
        return w;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t l = 0; l < alphabet_.size(); ++l) {
            if (l) s += ",";
            s += alphabet_.symbol(static_cast<Letter>(l)) + "->" + alphabet_.render(images_[l]);
        }
        return s;
    }

private:
    Alphabet alphabet_;
    std::vector<Word> images_;
};

// sigma o tau: first tau, then sigma.
inline Substitution compose(const Substitution& sigma, const Substitution& tau) {
    if (!(sigma.alphabet() == tau.alphabet())) throw std::invalid_argument("alphabet mismatch");
    std::vector<Word> images;
    for (const auto& im : tau.images()) images.push_back(sigma.apply(im));
    return Substitution(sigma.alphabet(), images);
}

inline Word fixed_point_prefix(const Substitution& sigma, Letter seed, std::size_t min_len) {
    const Word& im = sigma.image(seed);
    if (im.front() != seed) throw std::invalid_argument("image of the seed does not start with the seed");
    Word w{seed};
    while (w.size() < min_len) {
        Word next = sigma.apply(w);
        if (next.size() == w.size()) throw std::invalid_argument("iteration does not grow from the seed");
        w = std::move(next);
    }
    return w;
}

struct Abelianization {
    // counts[beta][alpha] = |sigma(alpha)|_beta
    std::vector<std::vector<long>> counts;
    bool equal_columns = false;

    std::vector<long> column(Letter alpha) const {
        std::vector<long> c;
        for (const auto& row : counts) c.push_back(row[static_cast<std::size_t>(alpha)]);
        return c;
    }
};

inline Abelianization abelianization(const Substitution& sigma) {
    std::size_t n = sigma.alphabet().size();
    Abelianization ab;
    ab.counts.assign(n, std::vector<long>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (Letter l : sigma.image(static_cast<Letter>(a))) ++ab.counts[static_cast<std::size_t>(l)][a];
    ab.equal_columns = true;
    for (std::size_t a = 1; a < n; ++a)
        if (ab.column(static_cast<Letter>(a)) != ab.column(0)) ab.equal_columns = false;
    return ab;
}

inline std::vector<std::vector<long>> matmul(const std::vector<std::vector<long>>& x,
                                             const std::vector<std::vector<long>>& y) {
    std::size_t n = x.size(), m = y.empty() ? 0 : y[0].size(), k = y.size();
    std::vector<std::vector<long>> r(n, std::vector<long>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t t = 0; t < k; ++t) r[i][j] += x[i][t] * y[t][j];
    return r;
}

struct BlockCoded {
    Alphabet alphabet;  // all k-blocks, lexicographic in the base alphabet order
    Word word;
};

inline Alphabet block_alphabet(const Alphabet& base, std::size_t k) {
    std::vector<std::string> blocks{""};
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::string> next;
        for (const auto& b : blocks)
            for (const auto& s : base.symbols()) next.push_back(b + s);
        blocks = std::move(next);
    }
    if (blocks.size() < 2) blocks.push_back("?");
    return Alphabet(blocks);
}

inline BlockCoded block_coding(const Alphabet& base, const Word& u, std::size_t k) {
    if (k == 0 || u.size() < k) throw std::invalid_argument("word shorter than block size");
    BlockCoded out{block_alphabet(base, k), {}};
    auto n = static_cast<Letter>(base.size());
    out.word.reserve(u.size() - k + 1);
    for (std::size_t i = 0; i + k <= u.size(); ++i) {
        Letter code = 0;
        for (std::size_t j = 0; j < k; ++j) code = code * n + u[i + j];
        out.word.push_back(code);
    }
    return out;
}

class DirectiveSequence {
public:
    DirectiveSequence(std::vector<Substitution> subs, std::vector<int> directive)
        : subs_(std::move(subs)), directive_(std::move(directive)) {
        if (subs_.empty()) throw std::invalid_argument("no substitutions");
        for (const auto& s : subs_) {
            if (!s.uniform()) throw std::invalid_argument("directive substitutions must be uniform");
            if (!(s.alphabet() == subs_[0].alphabet())) throw std::invalid_argument("alphabet mismatch");
            if (s.length() != subs_[0].length()) throw std::invalid_argument("length mismatch");
        }
        for (int d : directive_)
            if (d < 0 || static_cast<std::size_t>(d) >= subs_.size())
                throw std::invalid_argument("directive index out of range");
    }
    const std::vector<Substitution>& substitutions() const { return subs_; }
    const std::vector<int>& directive() const { return directive_; }
    const Substitution& at(std::size_t k) const { return subs_[static_cast<std::size_t>(directive_.at(k))]; }
    std::size_t length() const { return subs_[0].length(); }

private:
    std::vector<Substitution> subs_;
    std::vector<int> directive_;
};

// Prefix of lim sigma_{d0} sigma_{d1} ... sigma_{d(n-1)}(seed).
inline Word sadic_word(const DirectiveSequence& d, Letter seed, std::size_t min_len) {
    std::size_t n = 0, len = 1;
    while (len < min_len) {
        if (n >= d.directive().size()) throw std::invalid_argument("directive too short for the requested length");
        len *= d.length();
        ++n;
    }
    for (std::size_t k = 0; k < n; ++k)
        if (d.at(k).image(seed).front() != seed)
            throw std::invalid_argument("composition does not stabilize from the seed");
    Word w{seed};
    for (std::size_t k = n; k-- > 0;) w = d.at(k).apply(w);
    return w;
}

}  // namespace bp
