#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace apdperm {

// Bijection on {0..n-1}; image checked at construction, immutable afterwards.
class Perm {
public:
    explicit Perm(std::vector<uint32_t> image);
    static Perm identity(std::size_t n);

    std::size_t size() const { return image_.size(); }
    uint32_t operator()(std::size_t i) const { return image_[i]; }
    const std::vector<uint32_t>& image() const { return image_; }

    friend bool operator==(const Perm& a, const Perm& b) = default;

private:
    std::vector<uint32_t> image_;
};

// Canonical class of the progression (a, a+r, a+2r); identified with its
// reverse (a+2r, -r), stored as the lexicographically smaller (a, r).
struct ApTriple {
    uint32_t a = 0;
    uint32_t r = 0;
    friend auto operator<=>(const ApTriple&, const ApTriple&) = default;
};

ApTriple canonical_ap(uint64_t n, uint64_t a, uint64_t r);

struct ApReport {
    uint64_t n = 0;
    uint64_t preserved_count = 0;
    std::vector<ApTriple> preserved;  // canonical, sorted
    bool truncated = false;
};

struct VerifyOptions {
    // Above this many preserved classes only the first 100 witnesses are kept.
    uint64_t witness_cap = 1'000'000;
    unsigned threads = 1;
};

// Exhaustive scan of every canonical progression class; preserved_count == 0
// iff pi destroys all progressions. O(n^2).
ApReport verify(const Perm& pi, const VerifyOptions& options = {});

// Count only (no witness list).
uint64_t preserved_count(const Perm& pi, unsigned threads = 1);

// Number of canonical progression classes with r != 0: n * floor(n / 2).
uint64_t count_canonical_aps(uint64_t n);

// Glue sigma_q on Z/mZ and sigma_h on Z/hZ into pi on Z/mhZ with
// pi(r + m*k) = sigma_q(r) + m*sigma_h(k). Total; m, h need not be coprime.
Perm lift(const Perm& sigma_q, const Perm& sigma_h);

// Copy of pi with the images of i and j exchanged.
Perm apply_transposition(const Perm& pi, std::size_t i, std::size_t j);

// {"n": n, "image": [...]}
std::string to_json(const Perm& pi);
Perm from_json(const std::string& text);

// First line n, second line the n images separated by spaces. Lines starting
// with '#' are ignored on input (cache files carry a metadata comment).
std::string to_plain(const Perm& pi);
Perm from_plain(const std::string& text);

// Accepts either serialization, sniffing the leading non-space character.
Perm from_any(const std::string& text);

}  // namespace apdperm
