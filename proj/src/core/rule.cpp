// SPDX-License-Identifier: Apache-2.0
#include "oral/rule.hpp"

#include <algorithm>
#include <array>

namespace oral {

std::string_view to_string(ConditionOp op)
{
    return op == ConditionOp::In ? "in" : "contains";
}

std::string_view to_string(ConstraintOp op)
{
    switch (op) {
    case ConstraintOp::Equal: return "=";
    case ConstraintOp::In: return "in";
    case ConstraintOp::Contains: return "contains";
    case ConstraintOp::Supseteq: return "supseteq";
    }
    return "?";
}

namespace {

constexpr std::array kReserved{"true", "false", "in", "contains", "supseteq", "and", "subject", "resource", "rule"};

bool needs_quotes(const std::string& s)
{
    if (s.empty()) return true;
    for (auto* k : kReserved)
        if (s == k) return true;
    return !std::all_of(s.begin(), s.end(), [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
    });
}

} // namespace

std::string constant_text(const Constant& c)
{
    if (const bool* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(c);
    if (!needs_quotes(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
    return out;
}

bool constant_less(const Constant& a, const Constant& b)
{
    auto text = [](const Constant& c) { return std::holds_alternative<bool>(c) ? (std::get<bool>(c) ? std::string("true") : std::string("false")) : std::get<std::string>(c); };
    auto ta = text(a);
    auto tb = text(b);
    if (ta != tb) return ta < tb;
    return a.index() < b.index();
}

std::string path_text(const Path& p)
{
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '.';
        out += p[i];
    }
    return out;
}

namespace {

std::string prefixed(std::string_view prefix, const Path& p)
{
    std::string out(prefix);
    for (const auto& f : p) {
        out += '.';
        out += f;
    }
    return out;
}

} // namespace

std::string to_string(const AtomicCondition& c, std::string_view prefix)
{
    std::string out = prefixed(prefix, c.path);
    if (c.op == ConditionOp::Contains) {
        out += " contains ";
        out += c.values.empty() ? std::string("?") : constant_text(c.values.front());
        return out;
    }
    if (c.values.size() == 1) {
        out += " = ";
        out += constant_text(c.values.front());
        return out;
    }
    out += " in {";
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (i) out += ", ";
        out += constant_text(c.values[i]);
    }
    out += '}';
    return out;
}

std::string to_string(const AtomicConstraint& c)
{
    std::string out = prefixed("subject", c.subject_path);
    out += ' ';
    out += to_string(c.op);
    out += ' ';
    out += prefixed("resource", c.resource_path);
    return out;
}

namespace {

template <typename T, typename F>
std::string conjunction(const std::vector<T>& items, F&& text)
{
    if (items.empty()) return "true";
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += " and ";
        out += text(items[i]);
    }
    return out;
}

} // namespace

std::string to_string(const Rule& r)
{
    std::string out = "rule(";
    out += r.subject_type;
    out += "; ";
    out += conjunction(r.subject_condition, [](const AtomicCondition& c) { return to_string(c, "subject"); });
    out += "; ";
    out += r.resource_type;
    out += "; ";
    out += conjunction(r.resource_condition, [](const AtomicCondition& c) { return to_string(c, "resource"); });
    out += "; ";
    out += conjunction(r.constraint, [](const AtomicConstraint& c) { return to_string(c); });
    out += "; {";
    for (std::size_t i = 0; i < r.actions.size(); ++i) {
        if (i) out += ", ";
        out += r.actions[i];
    }
    out += "})";
    return out;
}

void canonicalize(AtomicCondition& c)
{
    std::sort(c.values.begin(), c.values.end(), constant_less);
    c.values.erase(std::unique(c.values.begin(), c.values.end()), c.values.end());
}

namespace {

template <typename T, typename Key>
void sort_unique(std::vector<T>& items, Key&& key)
{
    std::vector<std::pair<std::string, T>> keyed;
    keyed.reserve(items.size());
    for (auto& it : items) keyed.emplace_back(key(it), std::move(it));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }), keyed.end());
    items.clear();
    for (auto& [k, v] : keyed) items.push_back(std::move(v));
}

} // namespace

void canonicalize(Rule& r)
{
    for (auto& c : r.subject_condition) canonicalize(c);
    for (auto& c : r.resource_condition) canonicalize(c);
    sort_unique(r.subject_condition, [](const AtomicCondition& c) { return to_string(c, ""); });
    sort_unique(r.resource_condition, [](const AtomicCondition& c) { return to_string(c, ""); });
    sort_unique(r.constraint, [](const AtomicConstraint& c) { return to_string(c); });
    std::sort(r.actions.begin(), r.actions.end());
    r.actions.erase(std::unique(r.actions.begin(), r.actions.end()), r.actions.end());
}

Rule canonical(Rule r)
{
    canonicalize(r);
    return r;
}

std::size_t condition_count(const Rule& r)
{
    return r.subject_condition.size() + r.resource_condition.size();
}

} // namespace oral
