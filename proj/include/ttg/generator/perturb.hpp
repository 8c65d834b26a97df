#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ttg/error.hpp"
#include "ttg/generator/airports.hpp"
#include "ttg/generator/rng.hpp"
#include "ttg/schema/json_io.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

enum class PerturbKind { drop_constraint, flip_boolean, shift_budget, shift_window, swap_dates, change_city };

inline constexpr std::string_view to_string(PerturbKind k) {
    switch (k) {
        case PerturbKind::drop_constraint: return "drop_constraint";
        case PerturbKind::flip_boolean: return "flip_boolean";
        case PerturbKind::shift_budget: return "shift_budget";
        case PerturbKind::shift_window: return "shift_window";
        case PerturbKind::swap_dates: return "swap_dates";
        case PerturbKind::change_city: return "change_city";
    }
    return "?";
}

inline std::optional<PerturbKind> parse_perturb_kind(std::string_view s) {
    for (auto k : {PerturbKind::drop_constraint, PerturbKind::flip_boolean, PerturbKind::shift_budget,
                   PerturbKind::shift_window, PerturbKind::swap_dates, PerturbKind::change_city})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

/// One perturbation rule. `field` is a path such as
/// "airline_constraints.avoid_red_eye"; empty means every applicable field.
/// Each applicable field is perturbed independently with probability `p`.
struct PerturbRule {
    PerturbKind kind = PerturbKind::drop_constraint;
    std::string field;
    double p = 0.0;
    double delta = 0.1;  // shift_budget: relative change
    int minutes = 60;    // shift_window: shift of both window ends

    friend bool operator==(const PerturbRule&, const PerturbRule&) = default;
};

struct PerturbationSpec {
    std::vector<PerturbRule> rules;
    std::vector<std::string> city_pool;  // change_city replacements; empty means the default airports

    void validate() const {
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const auto& r = rules[i];
            std::string p = "rules[" + std::to_string(i) + "]";
            if (!(r.p >= 0.0 && r.p <= 1.0)) throw Error(ErrorKind::config_error, "probability must be in [0, 1]", p + ".p");
            if (r.kind == PerturbKind::shift_budget && !(r.delta > 0.0 && r.delta < 1.0))
                throw Error(ErrorKind::config_error, "delta must be in (0, 1)", p + ".delta");
            if (r.kind == PerturbKind::shift_window && r.minutes <= 0)
                throw Error(ErrorKind::config_error, "minutes must be positive", p + ".minutes");
        }
    }
};

struct FieldEdit {
    std::string path;
    nlohmann::json before;  // null when absent
    nlohmann::json after;

    friend bool operator==(const FieldEdit&, const FieldEdit&) = default;
};

struct AppliedPerturbation {
    PerturbKind kind = PerturbKind::drop_constraint;
    std::string field;
    std::vector<FieldEdit> edits;

    friend bool operator==(const AppliedPerturbation&, const AppliedPerturbation&) = default;
};

struct PerturbResult {
    TravelRequest request;
    std::vector<AppliedPerturbation> changes;
};

/// Drop and flip on every field with the same probability.
inline PerturbationSpec drop_flip_spec(double p) {
    return {{{PerturbKind::drop_constraint, "", p}, {PerturbKind::flip_boolean, "", p}}, {}};
}

namespace detail {

inline constexpr std::string_view kBooleanFields[] = {"refundable", "non_stop", "must_not_basic_economy", "avoid_red_eye",
                                                      "no_mixed_cabin"};
inline constexpr std::string_view kWindowFields[] = {"departure_window", "arrival_window"};

/// Splits "group.key" or "segments[k].key" into JSON pointer tokens.
inline nlohmann::json::json_pointer pointer_for(const std::string& path) {
    std::string ptr;
    std::size_t i = 0;
    while (i < path.size()) {
        std::size_t j = path.find_first_of(".[", i);
        std::string token = path.substr(i, j == std::string::npos ? std::string::npos : j - i);
        if (!token.empty()) ptr += "/" + token;
        if (j == std::string::npos) break;
        if (path[j] == '[') {
            std::size_t close = path.find(']', j);
            if (close == std::string::npos) throw Error(ErrorKind::invalid_argument, "bad field path", path);
            ptr += "/" + path.substr(j + 1, close - j - 1);
            i = close + 1;
            if (i < path.size() && path[i] == '.') ++i;
        } else {
            i = j + 1;
        }
    }
    return nlohmann::json::json_pointer(ptr);
}

inline nlohmann::json value_at(const nlohmann::json& j, const std::string& path) {
    auto ptr = pointer_for(path);
    return j.contains(ptr) ? j.at(ptr) : nlohmann::json();
}

inline void set_at(nlohmann::json& j, const std::string& path, const nlohmann::json& v) {
    auto ptr = pointer_for(path);
    if (v.is_null()) {
        if (j.contains(ptr)) j.at(ptr.parent_pointer()).erase(ptr.back());
    } else {
        j[ptr] = v;
    }
}

inline bool selected(const PerturbRule& r, const std::string& path) { return r.field.empty() || r.field == path; }

}  // namespace detail

/// Replays recorded edits on `x`; reproduces the perturbed request exactly.
inline TravelRequest apply_changes(const TravelRequest& x, const std::vector<AppliedPerturbation>& changes) {
    auto j = to_json(x);
    for (const auto& c : changes)
        for (const auto& e : c.edits) detail::set_at(j, e.path, e.after);
    return request_from_json(j);
}

/// Fields (paths) a rule may touch on `x`, in a fixed order.
inline std::vector<std::string> applicable_fields(const PerturbRule& rule, const TravelRequest& x) {
    const auto j = to_json(x);
    std::vector<std::string> out;
    auto consider = [&](const std::string& path, bool ok) {
        if (ok && detail::selected(rule, path)) out.push_back(path);
    };
    switch (rule.kind) {
        case PerturbKind::drop_constraint:
            for (const char* group : {"airline_constraints", "hotel_constraints", "budget"})
                for (const auto& [k, v] : j[group].items()) consider(std::string(group) + "." + k, true);
            break;
        case PerturbKind::flip_boolean:
            for (auto f : detail::kBooleanFields)
                consider("airline_constraints." + std::string(f), j["airline_constraints"].contains(std::string(f)));
            break;
        case PerturbKind::shift_budget:
            for (auto f : kBudgetFields) consider("budget." + std::string(f), j["budget"].contains(std::string(f)));
            break;
        case PerturbKind::shift_window:
            for (auto f : detail::kWindowFields)
                consider("airline_constraints." + std::string(f), j["airline_constraints"].contains(std::string(f)));
            break;
        case PerturbKind::swap_dates: {
            auto blocks = x.stay_blocks();
            bool any = false;
            for (std::size_t b = 0; b + 1 < blocks.size(); ++b)
                any = any || (blocks[b + 1].after_segment == blocks[b].after_segment + 1 &&
                              blocks[b].nights() != blocks[b + 1].nights());
            consider("segments", any);
            break;
        }
        case PerturbKind::change_city:
            consider("segments", x.segments.size() >= 2 || !x.is_round_trip());
            break;
    }
    return out;
}

/// Simulated translator: applies the spec's rules in order, at most one change
/// per field, and records every edit.
inline PerturbResult perturb_request(Rng& rng, const TravelRequest& x, const PerturbationSpec& spec) {
    spec.validate();
    auto j = to_json(x);
    std::set<std::string> changed;
    std::vector<AppliedPerturbation> changes;
    auto edit = [&](AppliedPerturbation& c, const std::string& path, nlohmann::json after) {
        c.edits.push_back({path, detail::value_at(j, path), after});
        detail::set_at(j, path, after);
    };
    std::vector<std::string> pool = spec.city_pool;
    if (pool.empty())
        for (const auto& a : default_airports()) pool.push_back(a.code);

    for (const auto& rule : spec.rules) {
        for (const auto& path : applicable_fields(rule, x)) {
            if (!bernoulli(rng, rule.p) || changed.count(path)) continue;
            AppliedPerturbation c{rule.kind, path, {}};
            switch (rule.kind) {
                case PerturbKind::drop_constraint: edit(c, path, nullptr); break;
                case PerturbKind::flip_boolean: edit(c, path, !detail::value_at(j, path).get<bool>()); break;
                case PerturbKind::shift_budget: {
                    auto v = detail::value_at(j, path).get<Cents>();
                    double sign = bernoulli(rng, 0.5) ? 1.0 : -1.0;
                    Cents after = std::max<Cents>(100, round_dollars(static_cast<double>(v) * (1.0 + sign * rule.delta)));
                    if (after == v) after = v + 100;
                    edit(c, path, after);
                    break;
                }
                case PerturbKind::shift_window: {
                    auto ws = detail::value_at(j, path);
                    int max_clock = path.ends_with("arrival_window") ? 2 * kMinutesPerDay - 1 : kMinutesPerDay - 1;
                    auto i = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ws.size()) - 1));
                    int e = ws[i]["earliest"].get<int>(), l = ws[i]["latest"].get<int>();
                    int shift = bernoulli(rng, 0.5) ? rule.minutes : -rule.minutes;
                    if (e + shift < 0 || l + shift > max_clock) shift = -shift;
                    if (e + shift < 0 || l + shift > max_clock) continue;
                    ws[i]["earliest"] = e + shift;
                    ws[i]["latest"] = l + shift;
                    edit(c, path, ws);
                    break;
                }
                case PerturbKind::swap_dates: {
                    auto blocks = x.stay_blocks();
                    std::vector<std::size_t> pairs;
                    for (std::size_t b = 0; b + 1 < blocks.size(); ++b)
                        if (blocks[b + 1].after_segment == blocks[b].after_segment + 1 &&
                            blocks[b].nights() != blocks[b + 1].nights())
                            pairs.push_back(b);
                    std::size_t b = pairs[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pairs.size()) - 1))];
                    auto k = static_cast<std::size_t>(blocks[b].after_segment + 1);
                    Date moved = blocks[b].check_in + blocks[b + 1].nights();
                    edit(c, "segments[" + std::to_string(k) + "].date", format_date(moved));
                    break;
                }
                case PerturbKind::change_city: {
                    // An away city: an intermediate stop, or the last destination of a one-way trip.
                    std::vector<std::size_t> slots;
                    for (std::size_t k = 0; k < x.segments.size(); ++k)
                        if (k + 1 < x.segments.size() || !x.is_round_trip()) slots.push_back(k);
                    auto cities = x.cities();
                    std::vector<std::string> fresh;
                    for (const auto& code : pool)
                        if (std::find(cities.begin(), cities.end(), code) == cities.end()) fresh.push_back(code);
                    if (slots.empty() || fresh.empty()) continue;
                    std::size_t k = slots[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(slots.size()) - 1))];
                    std::string city = fresh[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(fresh.size()) - 1))];
                    edit(c, "segments[" + std::to_string(k) + "].destination", city);
                    if (k + 1 < x.segments.size()) edit(c, "segments[" + std::to_string(k + 1) + "].origin", city);
                    break;
                }
            }
            changed.insert(path);
            changes.push_back(std::move(c));
        }
    }
    return {request_from_json(j), std::move(changes)};
}

inline nlohmann::json to_json(const AppliedPerturbation& c) {
    nlohmann::json edits = nlohmann::json::array();
    for (const auto& e : c.edits) edits.push_back({{"path", e.path}, {"before", e.before}, {"after", e.after}});
    return {{"kind", to_string(c.kind)}, {"field", c.field}, {"edits", edits}};
}

inline AppliedPerturbation applied_perturbation_from_json(const nlohmann::json& j) {
    try {
        AppliedPerturbation c;
        auto kind = parse_perturb_kind(j.at("kind").get<std::string>());
        if (!kind) throw Error(ErrorKind::schema_violation, "unknown perturbation kind", "kind");
        c.kind = *kind;
        c.field = j.at("field").get<std::string>();
        for (const auto& e : j.at("edits")) c.edits.push_back({e.at("path").get<std::string>(), e.at("before"), e.at("after")});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema_violation, e.what(), "changes");
    }
}

inline nlohmann::json to_json(const PerturbationSpec& s) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : s.rules) {
        nlohmann::json o = {{"kind", to_string(r.kind)}, {"p", r.p}};
        if (!r.field.empty()) o["field"] = r.field;
        if (r.kind == PerturbKind::shift_budget) o["delta"] = r.delta;
        if (r.kind == PerturbKind::shift_window) o["minutes"] = r.minutes;
        rules.push_back(o);
    }
    nlohmann::json j = {{"rules", rules}};
    if (!s.city_pool.empty()) j["city_pool"] = s.city_pool;
    return j;
}

inline PerturbationSpec perturbation_spec_from_json(const nlohmann::json& j) {
    PerturbationSpec s;
    try {
        if (!j.is_object()) throw Error(ErrorKind::config_error, "expected an object", "perturbation");
        for (const auto& [key, v] : j.items()) {
            if (key == "rules") {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const auto& o = v[i];
                    std::string p = "rules[" + std::to_string(i) + "]";
                    PerturbRule r;
                    for (const auto& [k, _] : o.items())
                        if (k != "kind" && k != "field" && k != "p" && k != "delta" && k != "minutes")
                            throw Error(ErrorKind::config_error, "unknown field", p + "." + k);
                    auto kind = parse_perturb_kind(o.at("kind").get<std::string>());
                    if (!kind) throw Error(ErrorKind::config_error, "unknown perturbation kind", p + ".kind");
                    r.kind = *kind;
                    r.field = o.value("field", std::string());
                    r.p = o.at("p").get<double>();
                    r.delta = o.value("delta", r.delta);
                    r.minutes = o.value("minutes", r.minutes);
                    s.rules.push_back(r);
                }
            } else if (key == "city_pool") {
                s.city_pool = v.get<std::vector<std::string>>();
            } else {
                throw Error(ErrorKind::config_error, "unknown field", key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::config_error, e.what(), "perturbation");
    }
    s.validate();
    return s;
}

}  // namespace ttg
