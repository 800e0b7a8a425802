// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "oral/error.hpp"
#include "oral/io.hpp"

namespace oral::io {

namespace {

const Json& member(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing \"" + key + "\"");
    return *it;
}

std::string string_member(const Json& j, const char* key, const std::string& where)
{
    const auto& v = member(j, key, where);
    if (!v.is_string()) throw ParseError(where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

const Json& array_member(const Json& j, const char* key, const std::string& where)
{
    const auto& v = member(j, key, where);
    if (!v.is_array()) throw ParseError(where + ": \"" + key + "\" must be an array");
    return v;
}

} // namespace

Json parse_json(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // Recover line and column from the byte offset.
        std::size_t line = 1, col = 1;
        const auto end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        auto pos = what.find("syntax error");
        throw ParseError(pos == std::string::npos ? what : what.substr(pos), line, col);
    }
}

Json to_json(const ClassModel& cm)
{
    Json classes = Json::array();
    for (const auto& spec : cm.specs()) {
        Json c;
        c["name"] = spec.name;
        c["parent"] = spec.parent ? Json(*spec.parent) : Json(nullptr);
        Json fields = Json::array();
        for (const auto& f : spec.fields)
            fields.push_back({{"name", f.name}, {"type", f.type}, {"multiplicity", std::string(to_string(f.multiplicity))}});
        c["fields"] = std::move(fields);
        classes.push_back(std::move(c));
    }
    return {{"classes", std::move(classes)}};
}

ClassModel class_model_from_json(const Json& j)
{
    std::vector<ClassSpec> specs;
    for (const auto& c : array_member(j, "classes", "class model")) {
        ClassSpec spec;
        spec.name = string_member(c, "name", "class");
        const std::string where = "class " + spec.name;
        if (auto it = c.find("parent"); it != c.end() && !it->is_null()) {
            if (!it->is_string()) throw ParseError(where + ": \"parent\" must be a string or null");
            spec.parent = it->get<std::string>();
        }
        if (c.contains("fields")) {
            for (const auto& f : array_member(c, "fields", where)) {
                FieldSpec fs;
                fs.name = string_member(f, "name", where + " field");
                const std::string fwhere = where + " field " + fs.name;
                fs.type = string_member(f, "type", fwhere);
                auto mtext = f.contains("multiplicity") ? string_member(f, "multiplicity", fwhere) : std::string("one");
                auto m = parse_multiplicity(mtext);
                if (!m) throw ParseError(fwhere + ": unknown multiplicity '" + mtext + "' (expected one, optional or many)");
                fs.multiplicity = *m;
                spec.fields.push_back(std::move(fs));
            }
        }
        specs.push_back(std::move(spec));
    }
    return ClassModel::build(std::move(specs));
}

Json to_json(const ObjectModel& om)
{
    Json objects = Json::array();
    for (const auto& spec : om.to_specs()) {
        Json fields = Json::object();
        for (const auto& [name, in] : spec.fields) {
            if (const bool* b = std::get_if<bool>(&in)) fields[name] = *b;
            else if (const auto* s = std::get_if<std::string>(&in)) fields[name] = *s;
            else if (const auto* l = std::get_if<std::vector<std::string>>(&in)) fields[name] = *l;
            else fields[name] = nullptr;
        }
        objects.push_back({{"class", spec.class_name}, {"id", spec.id}, {"fields", std::move(fields)}});
    }
    return {{"objects", std::move(objects)}};
}

ObjectModel object_model_from_json(std::shared_ptr<const ClassModel> cm, const Json& j)
{
    std::vector<ObjectSpec> specs;
    for (const auto& o : array_member(j, "objects", "object model")) {
        ObjectSpec spec;
        spec.id = string_member(o, "id", "object");
        const std::string where = "object " + spec.id;
        spec.class_name = string_member(o, "class", where);
        if (auto it = o.find("fields"); it != o.end()) {
            if (!it->is_object()) throw ParseError(where + ": \"fields\" must be an object");
            for (const auto& [name, v] : it->items()) {
                FieldInput in;
                if (v.is_null()) {
                    in = std::monostate{};
                } else if (v.is_boolean()) {
                    in = v.get<bool>();
                } else if (v.is_string()) {
                    in = v.get<std::string>();
                } else if (v.is_array()) {
                    std::vector<std::string> refs;
                    for (const auto& x : v) {
                        if (!x.is_string()) throw ParseError(where + " field " + name + ": references must be strings");
                        refs.push_back(x.get<std::string>());
                    }
                    in = std::move(refs);
                } else {
                    throw ParseError(where + " field " + name + ": unsupported value");
                }
                spec.fields.emplace_back(name, std::move(in));
            }
        }
        specs.push_back(std::move(spec));
    }
    return ObjectModel::build(std::move(cm), specs);
}

Json acl_to_json(const AclPolicy& acl)
{
    const auto& om = *acl.object_model;
    Json tuples = Json::array();
    for (const auto& t : acl.sp0) tuples.push_back(Json::array({om.id_of(t.subject), om.id_of(t.resource), t.action}));
    return {{"actions", acl.actions}, {"tuples", std::move(tuples)}};
}

AclPolicy acl_from_json(std::shared_ptr<const ClassModel> cm, std::shared_ptr<const ObjectModel> om, const Json& j)
{
    AclPolicy acl;
    acl.class_model = std::move(cm);
    acl.object_model = std::move(om);
    for (const auto& a : array_member(j, "actions", "acl")) {
        if (!a.is_string()) throw ParseError("acl: actions must be strings");
        acl.actions.push_back(a.get<std::string>());
    }
    std::sort(acl.actions.begin(), acl.actions.end());
    acl.actions.erase(std::unique(acl.actions.begin(), acl.actions.end()), acl.actions.end());
    for (const auto& t : array_member(j, "tuples", "acl")) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() || !t[2].is_string())
            throw ParseError("acl: each tuple must be [subject, resource, action]");
        auto s = acl.object_model->find(t[0].get<std::string>());
        auto r = acl.object_model->find(t[1].get<std::string>());
        if (!s) throw ModelError("acl: unknown subject '" + t[0].get<std::string>() + "'");
        if (!r) throw ModelError("acl: unknown resource '" + t[1].get<std::string>() + "'");
        acl.sp0.insert(PermissionTuple{*s, *r, t[2].get<std::string>()});
    }
    validate(acl);
    return acl;
}

} // namespace oral::io
