// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include "oral/error.hpp"
#include "oral/io.hpp"

namespace oral::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ModelError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& p, std::string_view content)
{
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ModelError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ModelError("write failed for " + tmp.string());
    }
    fs::rename(tmp, p);
}

namespace {

Json read_json(const fs::path& p)
{
    try {
        return parse_json(read_file(p));
    } catch (const ParseError& e) {
        throw ParseError(p.filename().string() + ":" + e.what());
    }
}

template <typename F>
auto in_file(const fs::path& p, F&& f)
{
    try {
        return f();
    } catch (const ParseError& e) {
        throw ParseError(p.filename().string() + ": " + e.what());
    } catch (const ModelError& e) {
        throw ModelError(p.filename().string() + ": " + e.what());
    }
}

// One tuple per line keeps large ACL files readable and diffable.
std::string acl_text(const AclPolicy& acl)
{
    const auto j = acl_to_json(acl);
    std::string out = "{\n  \"actions\": " + j["actions"].dump() + ",\n  \"tuples\": [";
    const auto& tuples = j["tuples"];
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        out += i ? ",\n    " : "\n    ";
        out += tuples[i].dump();
    }
    out += tuples.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

} // namespace

Bundle read_bundle(const fs::path& dir)
{
    Bundle b;
    const auto cm_path = dir / "class_model.json";
    const auto om_path = dir / "object_model.json";
    const auto acl_path = dir / "acl.json";
    b.class_model = std::make_shared<const ClassModel>(in_file(cm_path, [&] { return class_model_from_json(read_json(cm_path)); }));
    b.object_model = std::make_shared<const ObjectModel>(in_file(om_path, [&] { return object_model_from_json(b.class_model, read_json(om_path)); }));
    b.acl = std::make_shared<const AclPolicy>(in_file(acl_path, [&] { return acl_from_json(b.class_model, b.object_model, read_json(acl_path)); }));
    if (const auto p = dir / "rules.oral"; fs::exists(p)) {
        b.rules = in_file(p, [&] { return parse_rules(read_file(p)); });
        in_file(p, [&] {
            check_rules(*b.class_model, b.rules);
            return 0;
        });
    }
    if (const auto p = dir / "params.json"; fs::exists(p)) b.params = read_json(p);
    if (const auto p = dir / "metadata.json"; fs::exists(p)) b.metadata = read_json(p);
    return b;
}

void write_bundle(const fs::path& dir, const Bundle& b)
{
    fs::create_directories(dir);
    write_file_atomic(dir / "class_model.json", to_json(*b.class_model).dump(2) + "\n");
    write_file_atomic(dir / "object_model.json", to_json(*b.object_model).dump(2) + "\n");
    write_file_atomic(dir / "acl.json", acl_text(*b.acl));
    if (!b.rules.empty()) write_file_atomic(dir / "rules.oral", rules_to_text(b.rules));
    if (!b.params.empty()) write_file_atomic(dir / "params.json", b.params.dump(2) + "\n");
    if (!b.metadata.empty()) write_file_atomic(dir / "metadata.json", b.metadata.dump(2) + "\n");
}

} // namespace oral::io
