#include "apdperm/search.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace apdperm {

DescentOutcome descent(uint64_t n, const DescentConfig& cfg) {
    if (n == 0) throw OutOfRange("descent: n must be >= 1");
    return descent_over_ops(CyclicOps{static_cast<std::size_t>(n)}, cfg);
}

ExhaustiveResult exhaustive_exists(uint64_t n) {
    if (n == 0) throw OutOfRange("exhaustive_exists: n must be >= 1");
    if (n > 8)
        throw TooLarge("exhaustive_exists: factorial enumeration capped at 8");
    const CyclicOps ops{static_cast<std::size_t>(n)};
    std::vector<uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    ExhaustiveResult out;
    do {
        if (count_preserved_generic(ops, img) == 0) ++out.destroying_count;
    } while (std::next_permutation(img.begin(), img.end()));
    out.exists = out.destroying_count > 0;
    return out;
}

int64_t incremental_delta(const Perm& pi, std::size_t i, std::size_t j) {
    const std::size_t n = pi.size();
    if (i >= n || j >= n)
        throw OutOfRange("incremental_delta: index out of range");
    if (i == j) throw BadParams("incremental_delta: indices must differ");
    return swap_delta_generic(CyclicOps{n}, pi.image(), i, j);
}

namespace {

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v == nullptr ? std::string() : std::string(v);
}

}  // namespace

PermCache::PermCache(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) dir_ = resolve_default_dir();
}

std::string PermCache::resolve_default_dir() {
    if (auto d = env_or_empty("APDPERM_CACHE_DIR"); !d.empty()) return d;
    if (auto xdg = env_or_empty("XDG_CACHE_HOME"); !xdg.empty())
        return xdg + "/apdperm";
    if (auto home = env_or_empty("HOME"); !home.empty())
        return home + "/.cache/apdperm";
    return ".apdperm-cache";
}

std::string PermCache::cyclic_key(uint64_t n) {
    return "n" + std::to_string(n);
}

std::string PermCache::group_key(std::vector<uint64_t> factors) {
    if (factors.empty()) throw BadParams("group_key: empty factor list");
    std::sort(factors.begin(), factors.end());
    std::string key = "g";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) key += 'x';
        key += std::to_string(factors[i]);
    }
    return key;
}

std::string PermCache::path_for(const std::string& key) const {
    return dir_ + "/" + key + ".perm";
}

std::optional<Perm> PermCache::get(const std::string& key,
                                   const Checker& is_destroying) const {
    const std::string path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        Perm pi = from_plain(buffer.str());
        if (!is_destroying(pi))
            throw CorruptEntry("cache entry " + path +
                               " failed re-verification");
        return pi;
    } catch (const CorruptEntry&) {
        throw;
    } catch (const Error& e) {
        throw CorruptEntry("cache entry " + path + ": " + e.what());
    }
}

void PermCache::put(const std::string& key, const Perm& pi,
                    const CacheMeta& meta, const Checker& is_destroying) const {
    if (!is_destroying(pi))
        throw VerificationFailed("cache put " + key +
                                 ": permutation failed verification");
    std::filesystem::create_directories(dir_);
    const std::string path = path_for(key);
    // Write-then-rename so concurrent readers never see a partial file.
    const std::string tmp =
        path + ".tmp." +
        std::to_string(
            std::hash<std::string>{}(key + std::to_string(meta.seed)) ^
            reinterpret_cast<uintptr_t>(&path));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cache: cannot write " + tmp);
        out << "# apdperm-cache v1 key=" << key << " seed=" << meta.seed
            << " iterations=" << meta.iterations << '\n';
        out << to_plain(pi);
        if (!out) throw Error("cache: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace apdperm
