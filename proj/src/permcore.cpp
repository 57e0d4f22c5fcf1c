#include "apdperm/permcore.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "apdperm/ap_engine.hpp"
#include "apdperm/errors.hpp"

namespace apdperm {

Perm::Perm(std::vector<uint32_t> image) : image_(std::move(image)) {
    const std::size_t n = image_.size();
    if (n == 0) throw BadParams("Perm: image must be non-empty");
    std::vector<bool> seen(n, false);
    for (uint32_t v : image_) {
        if (v >= n || seen[v])
            throw BadParams("Perm: image is not a bijection on {0.." +
                            std::to_string(n - 1) + "}");
        seen[v] = true;
    }
}

Perm Perm::identity(std::size_t n) {
    if (n == 0) throw BadParams("Perm: size must be positive");
    std::vector<uint32_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<uint32_t>(i);
    return Perm(std::move(img));
}

ApTriple canonical_ap(uint64_t n, uint64_t a, uint64_t r) {
    if (n == 0) throw OutOfRange("canonical_ap: modulus must be positive");
    a %= n;
    r %= n;
    if (r == 0) throw BadParams("canonical_ap: degenerate progression (r = 0)");
    const uint64_t rev_a = (a + 2 * r) % n;
    const uint64_t rev_r = n - r;
    ApTriple fwd{static_cast<uint32_t>(a), static_cast<uint32_t>(r)};
    ApTriple rev{static_cast<uint32_t>(rev_a), static_cast<uint32_t>(rev_r)};
    return std::min(fwd, rev);
}

uint64_t count_canonical_aps(uint64_t n) {
    if (n == 0) throw OutOfRange("count_canonical_aps: n must be >= 1");
    return n * (n / 2);
}

namespace {

struct ChunkScan {
    uint64_t count = 0;
    std::vector<ApTriple> kept;
};

// Scans counted differences r in [r_lo, r_hi] over all base points, with
// incremental index maintenance. keep_cap bounds witness collection.
ChunkScan scan_difference_range(const std::vector<uint32_t>& img, std::size_t n,
                                std::size_t r_lo, std::size_t r_hi,
                                uint64_t keep_cap) {
    ChunkScan out;
    const int64_t m = static_cast<int64_t>(n);
    for (std::size_t r = r_lo; r <= r_hi; ++r) {
        std::size_t i1 = r;
        std::size_t i2 = r + r;
        if (i2 >= n) i2 -= n;
        for (std::size_t a = 0; a < n; ++a) {
            const int64_t s = static_cast<int64_t>(img[a]) +
                              static_cast<int64_t>(img[i2]) -
                              2 * static_cast<int64_t>(img[i1]);
            if (s == 0 || s == m || s == -m) {
                ++out.count;
                if (out.kept.size() < keep_cap)
                    out.kept.push_back(canonical_ap(n, a, r));
            }
            if (++i1 == n) i1 = 0;
            if (++i2 == n) i2 = 0;
        }
    }
    return out;
}

ApReport scan_all(const Perm& pi, uint64_t keep_cap, unsigned threads) {
    const std::size_t n = pi.size();
    ApReport report;
    report.n = n;
    const std::size_t r_max = n / 2;
    if (r_max == 0) return report;

    const unsigned workers = static_cast<unsigned>(
        std::max<std::size_t>(1, std::min<std::size_t>(threads, r_max)));
    std::vector<ChunkScan> chunks(workers);
    if (workers == 1) {
        chunks[0] = scan_difference_range(pi.image(), n, 1, r_max, keep_cap);
    } else {
        std::vector<std::thread> pool;
        const std::size_t per = (r_max + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = 1 + static_cast<std::size_t>(w) * per;
            const std::size_t hi = std::min(r_max, lo + per - 1);
            if (lo > hi) continue;
            pool.emplace_back([&, w, lo, hi] {
                chunks[w] = scan_difference_range(pi.image(), n, lo, hi, keep_cap);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (auto& c : chunks) {
        report.preserved_count += c.count;
        report.preserved.insert(report.preserved.end(), c.kept.begin(),
                                c.kept.end());
    }
    if (report.preserved_count > keep_cap) {
        report.truncated = true;
        if (report.preserved.size() > 100) report.preserved.resize(100);
    }
    std::sort(report.preserved.begin(), report.preserved.end());
    return report;
}

}  // namespace

ApReport verify(const Perm& pi, const VerifyOptions& options) {
    return scan_all(pi, options.witness_cap, options.threads);
}

uint64_t preserved_count(const Perm& pi, unsigned threads) {
    return scan_all(pi, 0, threads).preserved_count;
}

Perm lift(const Perm& sigma_q, const Perm& sigma_h) {
    const std::size_t m = sigma_q.size();
    const std::size_t h = sigma_h.size();
    if (m != 0 && h > SIZE_MAX / m) throw TooLarge("lift: product overflows");
    const std::size_t n = m * h;
    std::vector<uint32_t> img(n);
    for (std::size_t k = 0; k < h; ++k) {
        const std::size_t base = m * k;
        const std::size_t mapped = m * sigma_h(k);
        for (std::size_t r = 0; r < m; ++r)
            img[base + r] = static_cast<uint32_t>(mapped + sigma_q(r));
    }
    return Perm(std::move(img));
}

Perm apply_transposition(const Perm& pi, std::size_t i, std::size_t j) {
    const std::size_t n = pi.size();
    if (i >= n || j >= n)
        throw OutOfRange("apply_transposition: index out of range");
    if (i == j) throw BadParams("apply_transposition: indices must differ");
    std::vector<uint32_t> img = pi.image();
    std::swap(img[i], img[j]);
    return Perm(std::move(img));
}

std::string to_json(const Perm& pi) {
    nlohmann::json j;
    j["n"] = pi.size();
    j["image"] = pi.image();
    return j.dump();
}

Perm from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("permutation json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("image") ||
        !j["n"].is_number_unsigned() || !j["image"].is_array())
        throw ParseError("permutation json: expected {\"n\": ..., \"image\": [...]}");
    const uint64_t n = j["n"].get<uint64_t>();
    if (n == 0 || n > 0xFFFFFFFFull)
        throw ParseError("permutation json: n out of range");
    std::vector<uint32_t> img;
    img.reserve(j["image"].size());
    for (const auto& v : j["image"]) {
        if (!v.is_number_unsigned() || v.get<uint64_t>() >= n)
            throw ParseError("permutation json: image value out of range");
        img.push_back(static_cast<uint32_t>(v.get<uint64_t>()));
    }
    if (img.size() != n)
        throw ParseError("permutation json: image length does not match n");
    return Perm(std::move(img));
}

std::string to_plain(const Perm& pi) {
    std::ostringstream out;
    out << pi.size() << '\n';
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (i) out << ' ';
        out << pi(i);
    }
    out << '\n';
    return out.str();
}

Perm from_plain(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::ostringstream data;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line[first] == '#') continue;
        data << line << '\n';
    }
    std::istringstream tokens(data.str());
    uint64_t n = 0;
    if (!(tokens >> n) || n == 0 || n > 0xFFFFFFFFull)
        throw ParseError("permutation text: bad size line");
    std::vector<uint32_t> img;
    img.reserve(n);
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t v = 0;
        if (!(tokens >> v) || v >= n)
            throw ParseError("permutation text: bad image value at position " +
                             std::to_string(i));
        img.push_back(static_cast<uint32_t>(v));
    }
    uint64_t extra = 0;
    if (tokens >> extra) throw ParseError("permutation text: trailing data");
    return Perm(std::move(img));
}

Perm from_any(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? from_json(text) : from_plain(text);
    }
    throw ParseError("permutation: empty input");
}

}  // namespace apdperm
