#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "regenc/errors.hpp"

namespace regenc {

// Words are byte strings; each byte is one letter of some Alphabet.
using Word = std::string;

// Shortlex: shorter words first, equal lengths compared by letter rank.
// The rank is the byte value, which coincides with the alphabet order for
// every alphabet built by Alphabet::sorted or given in ascending order.
struct ShortlexLess {
    bool operator()(std::string_view a, std::string_view b) const noexcept {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

using FinWordSet = std::set<Word, ShortlexLess>;

/// Finite, non-empty, ordered set of letters.
///
/// The order is the one given at construction; it fixes letter ranks for
/// transition tables, JSON rows and shortlex enumeration. Constructing from
/// letters that are not in ascending byte order is rejected so that the
/// alphabet order and ShortlexLess can never disagree.
class Alphabet {
public:
    Alphabet() { rank_.fill(-1); }

    explicit Alphabet(std::string_view letters) : letters_(letters) {
        if (letters_.empty()) throw InputError("alphabet must be non-empty");
        rank_.fill(-1);
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            auto byte = static_cast<unsigned char>(letters_[i]);
            if (rank_[byte] != -1) throw InputError("alphabet has duplicate letter '" + std::string(1, letters_[i]) + "'");
            if (i > 0 && static_cast<unsigned char>(letters_[i - 1]) > byte)
                throw InputError("alphabet letters must be given in ascending order");
            rank_[byte] = static_cast<std::int16_t>(i);
        }
    }

    static Alphabet binary() { return Alphabet("01"); }
    static Alphabet unary() { return Alphabet("0"); }

    std::size_t size() const noexcept { return letters_.size(); }
    const std::string& letters() const noexcept { return letters_; }
    char letter(std::size_t rank) const { return letters_.at(rank); }

    bool contains(char c) const noexcept { return rank_[static_cast<unsigned char>(c)] >= 0; }

    std::size_t rank(char c) const {
        auto r = rank_[static_cast<unsigned char>(c)];
        if (r < 0) throw InputError("letter '" + std::string(1, c) + "' is not in alphabet {" + letters_ + "}");
        return static_cast<std::size_t>(r);
    }

    bool accepts(std::string_view w) const noexcept {
        for (char c : w)
            if (!contains(c)) return false;
        return true;
    }

    void require(std::string_view w) const {
        for (char c : w) (void)rank(c);
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept { return a.letters_ == b.letters_; }

private:
    std::string letters_;
    std::array<std::int16_t, 256> rank_{};
};

/// All words over `alphabet` of length at most `max_length`, in shortlex order.
inline std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_length) {
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_length; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (char c : alphabet.letters()) out.push_back(out[i] + c);
        begin = end;
    }
    return out;
}

inline std::size_t count_letter(std::string_view w, char c) noexcept {
    std::size_t n = 0;
    for (char x : w) n += (x == c);
    return n;
}

} // namespace regenc
