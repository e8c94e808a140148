#include "treedb/model.hpp"

#include <charconv>
#include <string>
#include <utility>

#include "treedb/errors.hpp"

namespace treedb {

ProcessLayout balanced_layout(std::size_t k, std::size_t p) {
    if (p == 0 || p > k) {
        throw ConfigError("layout needs 1..k blocks, got " + std::to_string(p) + " for k=" +
                          std::to_string(k));
    }
    ProcessLayout layout;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < p; ++i) {
        std::size_t len = k / p + (i < k % p ? 1 : 0);
        layout.push_back({"block" + std::to_string(i), offset, len});
        offset += len;
    }
    return layout;
}

void validate_layout(const ProcessLayout& layout, std::size_t k) {
    if (layout.empty()) throw ConfigError("process layout has no blocks");
    std::size_t next = 0;
    for (const auto& b : layout) {
        if (b.offset != next || b.length == 0) {
            throw ConfigError("process layout blocks must be contiguous and non-empty (block '" +
                              b.name + "')");
        }
        next += b.length;
    }
    if (next != k) {
        throw ConfigError("process layout covers " + std::to_string(next) + " of " +
                          std::to_string(k) + " slots");
    }
}

Model::Model(std::string name, std::size_t k, std::vector<StateVector> initial, ProcessLayout layout)
    : name_(std::move(name)), k_(k), initial_(std::move(initial)), layout_(std::move(layout)) {
    if (k_ == 0) throw ConfigError("state vectors need at least one slot");
    for (const auto& s : initial_) {
        if (s.size() != k_) throw ConfigError("initial state has wrong length");
    }
    if (layout_.empty()) layout_ = balanced_layout(k_, 1);
    validate_layout(layout_, k_);
}

EnumerationModel::EnumerationModel(std::string name, std::size_t k, std::vector<StateVector> states,
                                   ProcessLayout layout)
    : Model(std::move(name), k, std::move(states), std::move(layout)) {}

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (result > kSyntheticBudget / base) return kSyntheticBudget + 1;
        result *= base;
    }
    return result;
}

ProcessLayout synthetic_layout(std::size_t k, std::size_t blocks) {
    if (blocks == 0) blocks = (k % 2 == 0) ? 2 : 1;
    return balanced_layout(k, blocks);
}

void check_params(const SyntheticSpec& spec) {
    if (spec.k == 0) throw ConfigError("synthetic model needs k >= 1");
    switch (spec.kind) {
        case SyntheticKind::identical_slots:
            if (spec.n == 0) throw ConfigError("identical_slots needs n >= 1");
            break;
        case SyntheticKind::cross_product:
            if (spec.m == 0) throw ConfigError("cross_product needs m >= 1");
            if (spec.k < 2 || spec.k % 2 != 0) throw ConfigError("cross_product needs an even k");
            break;
        case SyntheticKind::uniform_slots:
            if (spec.r == 0) throw ConfigError("uniform_slots needs r >= 1");
            if ((spec.k & (spec.k - 1)) != 0) {
                throw ConfigError("uniform_slots needs k to be a power of two");
            }
            break;
    }
}

}  // namespace

std::uint64_t synthetic_cardinality(const SyntheticSpec& spec) {
    check_params(spec);
    switch (spec.kind) {
        case SyntheticKind::identical_slots: return spec.n;
        case SyntheticKind::cross_product: return spec.m * spec.m;
        case SyntheticKind::uniform_slots: return checked_pow(spec.r, spec.k);
    }
    return 0;
}

ModelPtr generate_synthetic(const SyntheticSpec& spec) {
    const std::uint64_t n = synthetic_cardinality(spec);
    if (n > kSyntheticBudget) {
        throw ConfigError("synthetic set of " + std::to_string(n) + " vectors exceeds the budget");
    }
    const std::size_t k = spec.k;
    std::vector<StateVector> states;
    switch (spec.kind) {
        case SyntheticKind::identical_slots: {
            states.reserve(n);
            for (std::uint64_t s = 1; s <= n; ++s) states.emplace_back(k, static_cast<Slot>(s));
            auto name = "identical:n=" + std::to_string(n) + ",k=" + std::to_string(k);
            return std::make_shared<EnumerationModel>(name, k, std::move(states),
                                                      synthetic_layout(k, spec.blocks));
        }
        case SyntheticKind::cross_product: {
            std::vector<StateVector> half;
            for (std::uint64_t i = 1; i <= spec.m; ++i) half.emplace_back(k / 2, static_cast<Slot>(i));
            return generate_cross_product(half, spec.blocks);
        }
        case SyntheticKind::uniform_slots: {
            states.reserve(n);
            StateVector v(k, 1);
            const Slot r = static_cast<Slot>(spec.r);
            for (std::uint64_t i = 0; i < n; ++i) {
                states.push_back(v);
                // odometer, last slot fastest
                for (std::size_t pos = k; pos-- > 0;) {
                    if (v[pos] < r) {
                        ++v[pos];
                        break;
                    }
                    v[pos] = 1;
                }
            }
            auto name = "uniform:r=" + std::to_string(spec.r) + ",k=" + std::to_string(k);
            return std::make_shared<EnumerationModel>(name, k, std::move(states),
                                                      synthetic_layout(k, spec.blocks));
        }
    }
    throw ConfigError("unknown synthetic kind");
}

ModelPtr generate_cross_product(const std::vector<StateVector>& half, std::size_t blocks) {
    if (half.empty()) throw ConfigError("cross_product needs a non-empty P");
    const std::size_t j = half.front().size();
    if (j == 0) throw ConfigError("cross_product needs vectors of length >= 1");
    for (const auto& p : half) {
        if (p.size() != j) throw ConfigError("cross_product members must have equal length");
    }
    const std::uint64_t n = std::uint64_t{half.size()} * half.size();
    if (n > kSyntheticBudget) throw ConfigError("cross_product set exceeds the budget");
    std::vector<StateVector> states;
    states.reserve(n);
    for (const auto& a : half) {
        for (const auto& b : half) {
            StateVector v(a);
            v.insert(v.end(), b.begin(), b.end());
            states.push_back(std::move(v));
        }
    }
    auto name = "cross:m=" + std::to_string(half.size()) + ",k=" + std::to_string(2 * j);
    return std::make_shared<EnumerationModel>(name, 2 * j, std::move(states),
                                              synthetic_layout(2 * j, blocks));
}

std::string to_string(SyntheticKind kind) {
    switch (kind) {
        case SyntheticKind::identical_slots: return "identical";
        case SyntheticKind::cross_product: return "cross";
        case SyntheticKind::uniform_slots: return "uniform";
    }
    return "?";
}

SyntheticSpec parse_synthetic(std::string_view text) {
    SyntheticSpec spec;
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    if (kind == "identical" || kind == "identical_slots") {
        spec.kind = SyntheticKind::identical_slots;
    } else if (kind == "cross" || kind == "cross_product") {
        spec.kind = SyntheticKind::cross_product;
    } else if (kind == "uniform" || kind == "uniform_slots") {
        spec.kind = SyntheticKind::uniform_slots;
    } else {
        throw ConfigError("unknown synthetic kind '" + std::string(kind) + "'");
    }
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected key=value in synthetic spec, got '" + std::string(item) + "'");
        }
        const std::string_view key = item.substr(0, eq);
        const std::string_view val = item.substr(eq + 1);
        std::uint64_t number = 0;
        auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), number);
        if (ec != std::errc{} || ptr != val.data() + val.size()) {
            throw ConfigError("bad number '" + std::string(val) + "' in synthetic spec");
        }
        if (key == "n") spec.n = number;
        else if (key == "k") spec.k = static_cast<std::size_t>(number);
        else if (key == "m") spec.m = number;
        else if (key == "r") spec.r = number;
        else if (key == "p") spec.blocks = static_cast<std::size_t>(number);
        else if (key == "j") spec.k = static_cast<std::size_t>(2 * number);
        else throw ConfigError("unknown synthetic parameter '" + std::string(key) + "'");
    }
    check_params(spec);
    return spec;
}

}  // namespace treedb
